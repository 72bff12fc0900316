// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ighsom/c45.hpp"
#include "ighsom/color.hpp"
#include "ighsom/filter.hpp"
#include "ighsom/hierarchy.hpp"
#include "ighsom/interactive.hpp"
#include "ighsom/records.hpp"
#include "ighsom/serialize.hpp"
#include "ighsom/session.hpp"
#include "ighsom/text_features.hpp"
#include "ighsom/text_util.hpp"
#include "support/http_fixture.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

#ifndef IGHSOM_TEST_DATA
#define IGHSOM_TEST_DATA "tests/data"
#endif

using namespace ighsom;
namespace synth = ighsom::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "; failed: ";
      else detail << ", ";
      detail << what;
      pass = false;
    }
  }
};

// --- 1 ------------------------------------------------------------------------

Outcome criterion_interactive_rules() {
  Outcome o;
  const auto t0 = Clock::now();
  const GrowthParams p;  // tau1=0.1 tau2=0.01 alpha=0.03 beta=2
  o.check(p.tau1 == 0.1 && p.tau2 == 0.01 && p.alpha == 0.03 && p.beta == 2.0, "default parameters");
  o.check(case1_stop(12, 500, p.alpha), "case1_stop(12, 500) == true");
  o.check(!case1_stop(16, 500, p.alpha), "case1_stop(16, 500) == false");
  const std::vector<double> with_25 = {2.5, 2.5, 5.0};
  const std::vector<double> with_19 = {1.9, 3.1, 5.0};
  o.check(kernels::ordered_sum(with_25) == 10.0 && kernels::ordered_sum(with_19) == 10.0, "winner sums are 10");
  o.check(case2_insert(2.5, with_25, p.beta, p.tau1), "case2_insert(2.5, sum 10) == true");
  o.check(!case2_insert(1.9, with_19, p.beta, p.tau1), "case2_insert(1.9, sum 10) == false");
  const double t = seconds_since(t0);
  o.check(t < 1.0, "runtime < 1 s");
  o.detail << "thresholds alpha*n_I=15, beta*tau1*sum=2; " << t * 1e3 << " ms";
  return o;
}

// --- 2 ------------------------------------------------------------------------

Outcome criterion_alpha_collapse() {
  Outcome o;
  GrowthParams collapse;
  collapse.alpha = 1.0;

  // 500 synthetic tourist records through the full feature pipeline.
  const auto records = synth::tourist_records(500, 2024);
  const auto corpus_docs = synth::tourist_corpus();
  const auto corpus = build_corpus(corpus_docs);
  const auto ds = build_features(records, score_records(records, corpus));

  const auto t0 = Clock::now();
  const auto before = grow(ds.features, GrowthParams{}, 7);
  const auto [after, report] = refine(before, {"[R]", collapse, 8}, ds.features);
  const double t = seconds_since(t0);
  o.check(depth(before) > 1, "baseline hierarchy is deeper than one layer");
  o.check(depth(after) == 1 && after.root.child_map && map_count(after) == 1, "depth 1 after alpha=1 refine");
  o.check(report.depth_after == 1, "report depth_after == 1");
  o.check(t < 10.0, "runtime < 10 s");

  // And on differently shaped datasets.
  const auto iris = synth::load_iris(IGHSOM_TEST_DATA "/iris.csv");
  const auto gauss = synth::four_gaussians(60, 3);
  for (const Matrix* m : {&iris.data, &gauss.data}) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const auto h = grow(*m, GrowthParams{}, seed);
      const auto r = refine(h, {"[R]", collapse, seed + 100}, *m);
      o.check(depth(r.first) == 1, "depth 1 on extra dataset, seed " + std::to_string(seed));
    }
  }
  o.detail << "500 records depth " << depth(before) << " -> " << depth(after) << ", case-1 stops "
           << report.case1_stops << "; " << t << " s";
  return o;
}

// --- 3 ------------------------------------------------------------------------

Outcome criterion_tfidf_oracle() {
  Outcome o;
  std::mt19937_64 rng(31337);
  const std::vector<std::string> vocab = {"sea",  "shrine", "deer",  "ramen", "castle", "island",
                                          "cafe", "lake",   "fish",  "temple", "bridge", "view"};
  std::size_t comparisons = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n_docs = 1 + rng() % 5;
    std::vector<std::vector<std::string>> docs;
    std::vector<std::pair<std::string, std::string>> input;
    for (std::size_t d = 0; d < n_docs; ++d) {
      const std::size_t len = 1 + rng() % 20;
      std::vector<std::string> tokens;
      std::string text;
      for (std::size_t k = 0; k < len; ++k) {
        tokens.push_back(vocab[rng() % vocab.size()]);
        text += (k ? " " : "") + tokens.back();
      }
      docs.push_back(tokens);
      input.emplace_back("d" + std::to_string(d), text);
    }
    const std::size_t c_len = 1 + rng() % 20;
    std::vector<std::string> comment;
    std::string comment_text;
    for (std::size_t k = 0; k < c_len; ++k) {
      // Occasionally a word the corpus never saw, exercising the df smoothing.
      comment.push_back(rng() % 6 == 0 ? "unseen" + std::to_string(rng() % 3) : vocab[rng() % vocab.size()]);
      comment_text += (k ? " " : "") + comment.back();
    }

    const auto corpus = build_corpus(input);
    const auto tokens = tokenize(comment_text);
    o.check(tokens == comment, "tokenizer reproduces generated tokens (trial " + std::to_string(trial) + ")");
    for (const auto& term : std::set<std::string>(comment.begin(), comment.end())) {
      const auto lib = tfidf_score(term, tokens, corpus);
      const auto ref = oracle::tfidf(term, comment, docs);
      const double err = std::max({std::abs(lib.tf - ref.tf), std::abs(lib.idf - ref.idf),
                                   std::abs(lib.tfidf - ref.tfidf)});
      worst = std::max(worst, err);
      ++comparisons;
    }
    const auto lib_top = comment_features(comment_text, corpus);
    const auto ref_top = oracle::top_l(comment, docs, 3);
    o.check(lib_top.top_terms.size() == ref_top.size(), "top-l size (trial " + std::to_string(trial) + ")");
    double ref_sum = 0.0, ref_max = 0.0;
    for (std::size_t i = 0; i < ref_top.size() && i < lib_top.top_terms.size(); ++i) {
      o.check(lib_top.top_terms[i].term == ref_top[i].first, "top-l term order (trial " + std::to_string(trial) + ")");
      ref_sum += ref_top[i].second;
      ref_max = std::max(ref_max, ref_top[i].second);
    }
    worst = std::max({worst, std::abs(lib_top.sum - ref_sum), std::abs(lib_top.max - ref_max)});
  }
  o.check(worst <= 1e-12, "max abs error <= 1e-12");
  o.detail << "50 corpora, " << comparisons << " term scores, max abs error " << worst;
  return o;
}

// --- 4 ------------------------------------------------------------------------

Outcome criterion_c45_oracle() {
  Outcome o;
  std::mt19937_64 rng(4242);
  std::size_t split_roots = 0, points = 0;
  double worst_ratio = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 29;  // 2..30
    const std::size_t classes = 2 + rng() % 2;
    const bool coarse = trial % 2 == 0;  // integer grid values create many ties
    InstanceSet set;
    set.attributes = {"a0", "a1", "a2", "a3"};
    std::vector<std::vector<double>> x;
    std::vector<std::string> y;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> row(4);
      for (auto& v : row) {
        v = coarse ? static_cast<double>(rng() % 5) : static_cast<double>(rng() % 100000) / 1000.0;
      }
      // Label correlated with a0 so that most datasets do split.
      const std::size_t cls = (row[0] > (coarse ? 2.0 : 50.0) ? 1 : 0) ^ (rng() % 4 == 0 ? 1 : 0);
      const std::string label = "k" + std::to_string(std::min(cls + (rng() % 5 == 0 ? 1 : 0), classes - 1));
      x.push_back(row);
      y.push_back(label);
      set.instances.push_back({row, label});
    }
    const std::string tag = " (dataset " + std::to_string(trial) + ")";

    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    const auto lib = choose_split(candidate_splits(set, all, 2));
    const auto ref = oracle::best_root_split(x, y, 2);
    o.check(lib.has_value() == ref.has_value(), "split existence" + tag);
    const auto tree = induce(set, 2);
    if (lib && ref) {
      ++split_roots;
      o.check(lib->attribute == ref->attribute, "root attribute" + tag);
      o.check(lib->threshold == ref->threshold, "root threshold" + tag);
      worst_ratio = std::max(worst_ratio, std::abs(lib->gain_ratio - ref->gain_ratio));
      o.check(!tree.root.is_leaf() && tree.root.attribute == ref->attribute && tree.root.threshold == ref->threshold,
              "induced root matches" + tag);
    }

    // Tree/rule equivalence on random points, a share of them placed exactly on thresholds.
    const auto rules = extract_rules(tree);
    std::vector<double> thresholds;
    std::function<void(const DecisionNode&)> walk = [&](const DecisionNode& nd) {
      if (nd.is_leaf()) return;
      thresholds.push_back(nd.threshold);
      walk(nd.le());
      walk(nd.gt());
    };
    walk(tree.root);
    for (int k = 0; k < 10000; ++k, ++points) {
      std::vector<double> p(4);
      for (auto& v : p) {
        if (!thresholds.empty() && rng() % 4 == 0) {
          v = thresholds[rng() % thresholds.size()];
        } else {
          v = coarse ? static_cast<double>(rng() % 7) - 1.0 : static_cast<double>(rng() % 120000) / 1000.0 - 10.0;
        }
      }
      const auto& expected = classify(tree, p);
      std::size_t matches = 0;
      const std::string* first = nullptr;
      for (const auto& r : rules) {
        const bool hit = std::all_of(r.antecedent.begin(), r.antecedent.end(), [&](const Condition& c) {
          const auto it = std::find(set.attributes.begin(), set.attributes.end(), c.attribute);
          return compare(p[static_cast<std::size_t>(it - set.attributes.begin())], c.op, c.value);
        });
        if (hit) {
          ++matches;
          if (!first) first = &r.area;
        }
      }
      if (matches != 1 || *first != expected) {
        o.check(false, "rules disagree with tree" + tag);
        break;
      }
    }
  }
  o.check(worst_ratio <= 1e-9, "gain ratio within 1e-9");
  o.detail << "100 datasets (" << split_roots << " with a root split), max gain-ratio error " << worst_ratio << ", "
           << points << " classification points";
  return o;
}

// --- 5 ------------------------------------------------------------------------

Outcome criterion_hue() {
  Outcome o;
  const double r = hue({255, 0, 0}), g = hue({0, 255, 0}), b = hue({0, 0, 255});
  o.check(std::abs(r - 0.0) <= 1e-9, "red -> 0");
  o.check(std::abs(g - 120.0) <= 1e-9, "green -> 120");
  o.check(std::abs(b - 240.0) <= 1e-9, "blue -> 240");
  for (RgbColor c : {RgbColor{255, 255, 0}, RgbColor{0, 255, 255}, RgbColor{255, 0, 255}}) {
    o.check(std::abs(hue(c) - oracle::hsv_hue(c.r, c.g, c.b)) <= 1e-9, "secondary agrees with hexcone hue");
  }
  std::size_t chromatic = 0;
  double worst = 0.0;
  for (int ri = 0; ri < 16; ++ri) {
    for (int gi = 0; gi < 16; ++gi) {
      for (int bi = 0; bi < 16; ++bi) {
        const RgbColor c{static_cast<std::uint8_t>(ri * 17), static_cast<std::uint8_t>(gi * 17),
                         static_cast<std::uint8_t>(bi * 17)};
        const RgbColor rotated{c.b, c.r, c.g};
        const double h0 = hue(c), h1 = hue(rotated);
        if (c.r == c.g && c.g == c.b) {
          o.check(h0 == 0.0 && h1 == 0.0, "achromatic hue is 0");
          continue;
        }
        ++chromatic;
        double diff = std::fmod(h1 - h0 - 120.0 + 720.0, 360.0);
        diff = std::min(diff, 360.0 - diff);
        worst = std::max(worst, diff);
      }
    }
  }
  o.check(worst <= 1e-9, "rotation by +120 degrees");
  o.detail << "primaries " << r << "/" << g << "/" << b << ", " << chromatic << " chromatic grid colors, max rotation error "
           << worst;
  return o;
}

// --- 6 ------------------------------------------------------------------------

bool partitions(const HierarchyNode& node) {
  if (!node.child_map) return true;
  std::vector<std::size_t> joined;
  for (const auto& c : node.children) joined.insert(joined.end(), c.samples.begin(), c.samples.end());
  std::sort(joined.begin(), joined.end());
  if (joined != node.samples) return false;
  for (std::size_t u = 0; u < node.child_map->unit_count(); ++u) {
    auto m = node.child_map->mapped(u);
    std::sort(m.begin(), m.end());
    if (m != node.children[u].samples) return false;
  }
  return std::all_of(node.children.begin(), node.children.end(), partitions);
}

Outcome criterion_iris() {
  Outcome o;
  const auto iris = synth::load_iris(IGHSOM_TEST_DATA "/iris.csv");
  o.check(iris.data.rows() == 150 && iris.data.cols() == 4, "iris is 150x4");
  const auto ds = normalize(iris.data, {"sepal_length", "sepal_width", "petal_length", "petal_width"});
  const GrowthParams p;
  const auto t0 = Clock::now();
  const auto h = grow(ds.features, p, 42);
  const double t = seconds_since(t0);

  // Every growth step logs how many scope samples its map assigned afterwards.
  std::size_t steps = 0;
  for (const auto& e : h.audit) {
    ++steps;
    if (e.assigned != e.scope) {
      o.check(false, "partition after a " + std::string(to_string(e.kind)) + " step");
      break;
    }
  }
  o.check(partitions(h.root), "final hierarchy partitions every scope");

  const double vthreshold = p.tau2 * h.qe0;
  std::size_t expansions = 0;
  for (const auto& e : h.audit) {
    if (e.kind != GrowthEventKind::expansion) continue;
    ++expansions;
    o.check(e.qe_k > vthreshold, "expansion qe_k > tau2*qe0");
  }
  std::size_t expanded_nodes = 0;
  visit(h.root, [&](const HierarchyNode& n) {
    if (!n.unit || !n.child_map) return;
    ++expanded_nodes;
    o.check(n.reference_qe > vthreshold, "expanded node qe > tau2*qe0");
  });
  o.check(expansions == expanded_nodes, "one expansion event per child map");

  std::set<Path> capped;
  for (const auto& e : h.audit) {
    if (e.kind == GrowthEventKind::cap_reached) capped.insert(e.map_path);
  }
  std::size_t maps = 0, via_cap = 0;
  visit(h.root, [&](const HierarchyNode& n) {
    if (!n.child_map) return;
    ++maps;
    const bool converged = n.child_map->mqe() < p.tau1 * n.reference_qe;
    if (!converged) ++via_cap;
    o.check(converged || capped.count(n.path), "final MQE < tau1*qe_parent or logged cap at " + path_label(n.path));
  });

  double pure = 0.0;
  for (const auto* leaf : leaf_units(h)) {
    std::map<std::string, std::size_t> counts;
    std::size_t best = 0;
    for (auto s : leaf->samples) best = std::max(best, ++counts[iris.labels[s]]);
    pure += static_cast<double>(best);
  }
  const double purity = pure / 150.0;
  o.check(purity >= 0.80, "weighted leaf purity >= 0.80");
  o.check(t < 30.0, "runtime < 30 s");
  o.detail << "depth " << depth(h) << ", " << maps << " maps (" << via_cap << " stopped by cap), " << steps
           << " logged steps, " << expansions << " expansions, purity " << purity << "; " << t << " s";
  return o;
}

// --- 7 ------------------------------------------------------------------------

std::size_t tree_nodes(const Hierarchy& h, const Matrix& x) {
  InstanceSet set;
  set.attributes = {"x", "y"};
  const auto labels = leaf_labels(h);
  for (std::size_t i = 0; i < x.rows(); ++i) set.instances.push_back({{x(i, 0), x(i, 1)}, labels[i]});
  return node_count(induce(set).root);
}

Outcome criterion_refine_simplifies() {
  Outcome o;
  const std::string target = "[R][00]";  // a root-map unit: the whole root map is regrown
  const std::size_t per_cluster = 50;

  // alpha is calibrated on a held-out seed: the smallest grid value whose refine triggers
  // Case-1 stops there. The evaluation seeds never influence the choice.
  double alpha = 0.0;
  {
    const auto g = synth::four_gaussians(per_cluster, 1000);
    const auto ds = normalize(g.data, {"x", "y"});
    const auto h = grow(ds.features, GrowthParams{}, 1000);
    for (int step = 1; step <= 20 && alpha == 0.0; ++step) {
      GrowthParams p;
      p.alpha = 0.05 * step;
      if (refine(h, {target, p, 1001}, ds.features).second.case1_stops > 0) alpha = p.alpha;
    }
  }
  o.check(alpha > 0.0, "calibration found an alpha that triggers Case-1 stops");

  int successes = 0;
  std::ostringstream per_seed;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto g = synth::four_gaussians(per_cluster, seed);
    const auto ds = normalize(g.data, {"x", "y"});
    const auto before = grow(ds.features, GrowthParams{}, seed);
    GrowthParams p;
    p.alpha = alpha;
    const auto [after, report] = refine(before, {target, p, seed * 7919}, ds.features);
    const auto nb = tree_nodes(before, ds.features), na = tree_nodes(after, ds.features);
    const bool ok = report.case1_stops > 0 && depth(after) < depth(before) && na < nb;
    successes += ok ? 1 : 0;
    per_seed << (seed > 1 ? " " : "") << depth(before) << "->" << depth(after) << "/" << nb << "->" << na;
  }
  o.check(successes >= 8, "at least 8 of 10 seeds simplify");
  o.detail << "alpha " << alpha << ", " << successes << "/10 seeds; depth/tree nodes: " << per_seed.str();
  return o;
}

// --- 8 ------------------------------------------------------------------------

Outcome criterion_miyajima_rule() {
  Outcome o;
  const std::string rule_text =
      "Rule:\n"
      " IF `evaluation' > 2 & `lon' < 132.386\n"
      "    & `lat' < 34.4323 & `tfidf' > 0.4022\n"
      " THEN Area is `Miyajima'.\n";

  synth::LiveServer server;
  auto cli = server.client();
  const auto created = cli.Post("/sessions");
  if (!created || created->status != 201) {
    o.check(false, "session creation");
    return o;
  }
  const auto id = Json::parse(created->body).at("id").get<std::string>();
  const std::string base = "/sessions/" + id;

  // Nine reference documents, none mentioning the comment's words.
  Json docs = Json::array();
  for (const auto& [doc_id, text] : synth::tourist_corpus()) docs.push_back({{"id", doc_id}, {"text", text}});
  for (int k = 0; k < 4; ++k) docs.push_back({{"id", "extra" + std::to_string(k)}, {"text", "ramen castle tram"}});
  const auto corpus = cli.Post(base + "/corpus", Json{{"documents", docs}}.dump(), "application/json");
  o.check(corpus && corpus->status == 200, "corpus upload");

  // Records hold at most 140 characters, so a 138-character comment forces truncation once the
  // hashtag is appended.
  std::string long_comment;
  while (utf8_length(long_comment) < 138) long_comment += "Torii at dusk, torii in the tide. ";
  long_comment = utf8_truncate(long_comment, 138);
  Json match = {{"no", 501}, {"lat", 34.296}, {"lon", 132.3199}, {"alt", 3.5}, {"name", "Itsukushima"},
                {"evaluation", 4}, {"comment", long_comment}};
  Json boundary = match;
  boundary["no"] = 502;
  boundary["evaluation"] = 2;  // fails the strict `evaluation' > 2 test only
  const auto res = cli.Post(base + "/filter", Json{{"records", {match, boundary}}, {"rules", rule_text}}.dump(),
                            "application/json");
  if (!res || res->status != 200) {
    o.check(false, "filter request (" + (res ? std::to_string(res->status) + " " + res->body : "no response") + ")");
    return o;
  }
  const auto body = Json::parse(res->body);
  const auto& msgs = body.at("messages");
  o.check(body.at("evaluated") == 2, "both records evaluated");
  o.check(msgs.size() == 1, "exactly one emitted message");
  std::string text;
  if (msgs.size() == 1) {
    text = msgs[0].at("text").get<std::string>();
    o.check(msgs[0].at("record_id") == 501, "message comes from the matching record");
    o.check(msgs[0].at("area") == "Miyajima", "area is Miyajima");
    o.check(text.size() >= kHashtag.size() && text.ends_with(kHashtag), "text ends with #KankouMap");
    o.check(utf8_length(text) <= 140, "length <= 140");
    o.check(text.starts_with(long_comment.substr(0, 100)), "comment prefix preserved");
  }
  const auto rules = parse_rules_text(rule_text);
  o.check(rules.size() == 1 && rules[0].antecedent.size() == 4 && rules[0].antecedent[3].value == 0.4022,
          "rule parsed verbatim");
  const auto session = server.sessions().get(id);
  o.check(session->outbox().messages().size() == 1, "sink received exactly one delivery");
  o.detail << "1 of 2 records emitted, " << utf8_length(text) << " chars: \"" << text.substr(0, 24) << "...\"";
  return o;
}

// --- 9 ------------------------------------------------------------------------

Outcome criterion_audit_replay() {
  Outcome o;
  const auto records = synth::tourist_records(240, 99);
  Session s("replay");
  s.upload_data(render_csv(records));
  s.upload_corpus(synth::tourist_corpus());
  s.train(GrowthParams{}, 1234);

  // Three refines on nodes taken from the current hierarchy, each with its own params.
  auto pick = [&](std::size_t level) {
    const auto h = s.state()->hierarchy;
    const HierarchyNode* node = &h->root;
    for (std::size_t k = 0; k < level; ++k) {
      // Prefer a child that owns a map, else the first non-empty unit.
      const HierarchyNode* next = nullptr;
      for (const auto& c : node->children) {
        if (c.has_map()) {
          next = &c;
          break;
        }
        if (!next && !c.samples.empty()) next = &c;
      }
      if (!next) break;
      node = next;
    }
    return path_label(node->path);
  };
  std::vector<std::string> targets;
  targets.push_back(pick(2));
  s.refine(targets.back(), Json{{"alpha", 0.1}}, 11);
  targets.push_back(pick(1));
  s.refine(targets.back(), Json{{"beta", 1.5}, {"tau1", 0.08}}, 22);
  targets.push_back("[R]");
  s.refine(targets.back(), Json{{"alpha", 0.05}, {"lambda", 60}}, 33);

  const auto original = s.export_snapshot().dump();
  const auto st = s.state();
  const auto replayed = replay(st->dataset->features, s.audit());
  const auto again = snapshot_to_json(replayed, dataset_fingerprint(*st->dataset), &*st->basis).dump();
  std::size_t trains = 0, refines = 0;
  for (const auto& e : s.audit()) {
    trains += e.kind == "train";
    refines += e.kind == "refine";
  }
  o.check(trains == 1 && refines == 3, "audit holds 1 train + 3 refines");
  o.check(original == again, "replayed snapshot is byte-identical");

  // The snapshot also round-trips through import on a fresh session over the same data.
  Session fresh("import");
  fresh.upload_data(render_csv(records));
  fresh.upload_corpus(synth::tourist_corpus());
  fresh.import_snapshot(Json::parse(original));
  o.check(fresh.export_snapshot().dump() == original, "import/export round trip is byte-identical");
  o.detail << "targets " << targets[0] << ", " << targets[1] << ", " << targets[2] << "; snapshot " << original.size()
           << " bytes";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "stratification-stop and error-driven insertion rules", criterion_interactive_rules},
      {2, "alpha = 1 refine collapses to depth 1", criterion_alpha_collapse},
      {3, "tf-idf matches brute-force oracle", criterion_tfidf_oracle},
      {4, "C4.5 matches exhaustive split search; rules match tree", criterion_c45_oracle},
      {5, "hue formula and 120-degree rotation", criterion_hue},
      {6, "GHSOM invariants and purity on Iris", criterion_iris},
      {7, "Case-1 refine simplifies hierarchy and tree", criterion_refine_simplifies},
      {8, "Miyajima filter rule end to end", criterion_miyajima_rule},
      {9, "audit replay reproduces the snapshot", criterion_audit_replay},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << c.id << "] " << c.name << " -- " << o.detail.str() << '\n';
  }
  std::cout << (failed ? "acceptance: " + std::to_string(failed) + " criterion(s) failed" : "acceptance: all passed")
            << '\n';
  return failed ? 1 : 0;
}
