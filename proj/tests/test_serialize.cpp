#include <doctest.h>

#include "ighsom/errors.hpp"
#include "ighsom/serialize.hpp"
#include "support/generators.hpp"
#include "support/synthetic.hpp"

using namespace ighsom;

namespace {

Dataset gauss_dataset(std::size_t per, std::uint64_t seed) {
  return normalize(testing::four_gaussians(per, seed).data, {"x", "y"});
}

void check_same(const Hierarchy& a, const Hierarchy& b) {
  CHECK(a.root == b.root);
  CHECK(a.qe0 == b.qe0);
  CHECK(a.layer0_mean == b.layer0_mean);
  CHECK(a.seed == b.seed);
  CHECK(a.sample_count == b.sample_count);
  CHECK(a.audit == b.audit);
  CHECK(params_to_json(a.params) == params_to_json(b.params));
}

}  // namespace

TEST_SUITE("rule files") {
  TEST_CASE("json form") {
    const std::vector<FilterRule> rules = {
        {{{"evaluation", Comparator::gt, 2}, {"lon", Comparator::lt, 132.386}}, "Miyajima"}, {{}, "Other"}};
    const auto j = rules_to_json(rules);
    CHECK(j.dump() ==
          R"([{"if":[{"attr":"evaluation","op":">","value":2.0},{"attr":"lon","op":"<","value":132.386}],"then":"Miyajima"},{"if":[],"then":"Other"}])");
    CHECK(rules_from_json(j) == rules);
    CHECK(rules_from_json(Json::parse(j.dump())) == rules);
  }

  TEST_CASE("rule text inside json") {
    const auto rules = rules_from_json(Json("IF `lat' <= 34 THEN Area is `X'."));
    REQUIRE(rules.size() == 1);
    CHECK(rules[0].antecedent[0] == Condition{"lat", Comparator::le, 34});
  }

  TEST_CASE("malformed rule files") {
    CHECK_THROWS_AS(rules_from_json(Json::object()), ConfigurationError);
    CHECK_THROWS_AS(rules_from_json(Json::parse(R"([{"if":[{"attr":"lat","op":"=","value":1}],"then":"A"}])")),
                    ConfigurationError);
    CHECK_THROWS_AS(rules_from_json(Json::parse(R"([{"if":[{"attr":"lat","op":">"}],"then":"A"}])")),
                    ConfigurationError);
    CHECK_THROWS_AS(rules_from_json(Json::parse(R"([{"if":[]}])")), ConfigurationError);
  }
}

TEST_SUITE("params and records") {
  TEST_CASE("params round-trip and partial overrides") {
    GrowthParams p;
    p.tau1 = 0.07;
    p.alpha = 0.25;
    p.lambda = 42;
    const auto back = params_from_json(params_to_json(p));
    CHECK(params_to_json(back) == params_to_json(p));
    const auto over = params_from_json(Json::parse(R"({"beta": 3.5})"), p);
    CHECK(over.beta == 3.5);
    CHECK(over.tau1 == 0.07);
    CHECK(params_from_json(Json(), p).lambda == 42);
    CHECK_THROWS_AS(params_from_json(Json::array()), ParseError);
  }

  TEST_CASE("property: records survive json") {
    gen::Rng rng(12);
    for (int i = 0; i < 300; ++i) {
      const auto r = gen::record(rng, i + 1);
      CHECK(record_from_json(Json::parse(record_to_json(r).dump())) == r);
    }
  }
}

TEST_SUITE("snapshots") {
  TEST_CASE("round-trip is exact") {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      const auto ds = gauss_dataset(30, seed);
      auto h = grow(ds.features, {}, seed);
      GrowthParams p;
      p.alpha = 0.2;
      h = refine(h, {"[R][00]", p, seed + 10}, ds.features).first;
      const auto fp = dataset_fingerprint(ds);
      const auto basis = fit_pca(ds.features);
      const auto j = snapshot_to_json(h, fp, &basis);
      CHECK(j.at("version") == std::string(kSnapshotVersion));
      std::string fp_back;
      const auto back = snapshot_from_json(Json::parse(j.dump()), &fp_back);
      CHECK(fp_back == fp);
      check_same(h, back);
      CHECK(map_count(back) == map_count(h));
      CHECK(snapshot_to_json(back, fp, &basis).dump() == j.dump());
    }
  }

  TEST_CASE("weights are stored as bit patterns") {
    const auto ds = gauss_dataset(10, 3);
    const auto h = grow(ds.features, {}, 3);
    const auto text = snapshot_to_json(h, dataset_fingerprint(ds)).dump();
    CHECK(text.find("\"weights\"") != std::string::npos);
    // Binary fractions like 0.1 would show up as decimals if doubles leaked through as numbers.
    const auto j = Json::parse(text);
    CHECK(j.at("qe0").is_string());
    CHECK(j.at("qe0").get<std::string>().size() == 16);
  }

  TEST_CASE("bad snapshots are parse errors") {
    const auto ds = gauss_dataset(10, 3);
    auto j = snapshot_to_json(grow(ds.features, {}, 3), dataset_fingerprint(ds));
    auto wrong_version = j;
    wrong_version["version"] = "other/9";
    CHECK_THROWS_AS(snapshot_from_json(wrong_version), ParseError);
    auto missing = j;
    missing.erase("root");
    CHECK_THROWS_AS(snapshot_from_json(missing), ParseError);
    CHECK_THROWS_AS(snapshot_from_json(Json::array()), ParseError);
  }
}

TEST_SUITE("fingerprint") {
  TEST_CASE("equal data, equal print; any bit flip changes it") {
    const auto a = gauss_dataset(20, 1);
    const auto b = gauss_dataset(20, 1);
    CHECK(dataset_fingerprint(a) == dataset_fingerprint(b));
    CHECK(dataset_fingerprint(a).size() == 16);
    auto c = a;
    c.features(3, 1) = std::nextafter(c.features(3, 1), 1e9);
    CHECK(dataset_fingerprint(c) != dataset_fingerprint(a));
    auto d = a;
    d.schema[0] = "z";
    CHECK(dataset_fingerprint(d) != dataset_fingerprint(a));
    CHECK(dataset_fingerprint(gauss_dataset(20, 2)) != dataset_fingerprint(a));
  }
}

TEST_SUITE("summaries") {
  TEST_CASE("hierarchy summary carries labels, counts and colors") {
    const auto ds = gauss_dataset(25, 5);
    const auto h = grow(ds.features, {}, 5);
    const auto basis = fit_pca(ds.features);
    const auto j = hierarchy_summary(h, basis);
    CHECK(j.at("samples") == 100);
    CHECK(j.at("depth") == depth(h));
    const auto& root = j.at("root");
    CHECK(root.at("path") == "[R]");
    CHECK(root.at("count") == 100);
    std::size_t total = 0;
    for (const auto& u : root.at("map").at("units")) {
      total += u.at("count").get<std::size_t>();
      const auto color = u.at("color").get<std::string>();
      CHECK(color.size() == 7);
      CHECK(color[0] == '#');
      CHECK(u.at("label").get<std::string>().find(':') != std::string::npos);
    }
    CHECK(total == 100);
    const auto colors = hierarchy_colors(h, basis);
    std::size_t units = 0;
    visit(h.root, [&](const HierarchyNode& n) {
      if (n.child_map) units += n.child_map->unit_count();
    });
    CHECK(colors.size() == units);
  }

  TEST_CASE("tree json") {
    InstanceSet s;
    s.attributes = {"x"};
    s.instances = {{{1}, "A"}, {{2}, "A"}, {{8}, "B"}, {{9}, "B"}};
    const auto j = tree_to_json(induce(s));
    CHECK(j.at("attributes") == Json::array({"x"}));
    const auto& root = j.at("root");
    CHECK(root.at("attribute") == "x");
    CHECK(root.at("threshold") == 5.0);
    CHECK(root.at("le").at("label") == "A");
    CHECK(root.at("gt").at("support") == 2);
  }
}
