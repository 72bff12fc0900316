#include "ighsom/http_api.hpp"

#include <httplib.h>
#include <charconv>

#include "ighsom/errors.hpp"

namespace ighsom {

int status_for_current_exception(std::string& message, Json& detail) {
  try {
    throw;
  } catch (const IngestError& e) {
    message = e.what();
    Json diags = Json::array();
    for (const auto& d : e.diagnostics()) {
      diags.push_back({{"line", d.line},
                       {"kind", d.kind == RowDiagnostic::Kind::parse ? "parse" : "validation"},
                       {"message", d.message}});
    }
    detail["diagnostics"] = std::move(diags);
    return 422;
  } catch (const FingerprintError& e) {
    message = e.what();
    detail["snapshot_fingerprint"] = e.snapshot_hash();
    detail["dataset_fingerprint"] = e.dataset_hash();
    return 409;
  } catch (const NotFoundError& e) {
    message = e.what();
    return 404;
  } catch (const ConflictError& e) {
    message = e.what();
    return 409;
  } catch (const PreconditionError& e) {
    message = e.what();
    return 412;
  } catch (const DeliveryError& e) {
    message = e.what();
    detail["message"] = message_to_json(e.message());
    return 502;
  } catch (const ParseError& e) {
    message = e.what();
    return 400;
  } catch (const nlohmann::json::exception& e) {
    message = std::string("invalid JSON: ") + e.what();
    return 400;
  } catch (const ContractError& e) {
    message = e.what();
    return 422;
  } catch (const ValidationError& e) {
    message = e.what();
    return 422;
  } catch (const ConfigurationError& e) {
    message = e.what();
    return 422;
  } catch (const std::exception& e) {
    message = e.what();
    return 500;
  }
}

namespace {

void reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (...) {
      std::string message;
      Json detail = Json::object();
      const int status = status_for_current_exception(message, detail);
      detail["error"] = message;
      reply(res, status, detail);
    }
  };
}

Json body_json(const httplib::Request& req) {
  if (req.body.empty()) return Json::object();
  return Json::parse(req.body);
}

std::uint64_t required_seed(const Json& body) {
  if (!body.contains("seed")) throw ValidationError("a seed is required; the server does not pick one");
  return body.at("seed").get<std::uint64_t>();
}

std::vector<TouristRecord> records_from_body(const Json& body) {
  if (body.contains("csv")) return parse_records(body.at("csv").get<std::string>());
  std::vector<TouristRecord> out;
  if (body.contains("records")) {
    for (const auto& r : body.at("records")) out.push_back(record_from_json(r));
  }
  return out;
}

}  // namespace

void register_routes(httplib::Server& server, SessionManager& sessions) {
  const std::string sid = R"(/sessions/([^/]+))";

  server.Post("/sessions", guarded([&](const httplib::Request&, httplib::Response& res) {
                auto s = sessions.create();
                reply(res, 201, {{"id", s->id()}});
              }));

  server.Post(sid + "/data", guarded([&](const httplib::Request& req, httplib::Response& res) {
                auto s = sessions.get(req.matches[1]);
                std::string csv = req.body;
                if (req.get_header_value("Content-Type").find("json") != std::string::npos) {
                  csv = body_json(req).at("csv").get<std::string>();
                }
                const auto n = s->upload_data(csv);
                reply(res, 200, {{"records", n}, {"schema", s->state()->dataset->schema}});
              }));

  server.Post(sid + "/corpus", guarded([&](const httplib::Request& req, httplib::Response& res) {
                auto s = sessions.get(req.matches[1]);
                const auto body = body_json(req);
                std::vector<std::pair<std::string, std::string>> docs;
                for (const auto& d : body.at("documents")) {
                  docs.emplace_back(d.at("id").get<std::string>(), d.at("text").get<std::string>());
                }
                const auto n = s->upload_corpus(docs);
                reply(res, 200, {{"documents", n}, {"terms", s->state()->corpus->doc_frequency().size()}});
              }));

  server.Post(sid + "/train", guarded([&](const httplib::Request& req, httplib::Response& res) {
                auto s = sessions.get(req.matches[1]);
                const auto body = body_json(req);
                const auto seed = required_seed(body);
                const auto params = params_from_json(body.contains("params") ? body.at("params") : Json());
                reply(res, 200, s->train(params, seed));
              }));

  server.Get(sid + "/hierarchy", guarded([&](const httplib::Request& req, httplib::Response& res) {
               reply(res, 200, sessions.get(req.matches[1])->hierarchy_summary());
             }));

  server.Get(sid + R"(/nodes/([^/]+)/samples)", guarded([&](const httplib::Request& req, httplib::Response& res) {
               reply(res, 200, sessions.get(req.matches[1])->node_samples(req.matches[2]));
             }));

  server.Post(sid + R"(/nodes/([^/]+)/refine)", guarded([&](const httplib::Request& req, httplib::Response& res) {
                auto s = sessions.get(req.matches[1]);
                const auto body = body_json(req);
                const auto seed = required_seed(body);
                auto [report, subtree] =
                    s->refine(req.matches[2], body.contains("params") ? body.at("params") : Json(), seed);
                reply(res, 200, {{"report", report_to_json(report)}, {"subtree", std::move(subtree)}});
              }));

  server.Get(sid + "/rules", guarded([&](const httplib::Request& req, httplib::Response& res) {
               auto s = sessions.get(req.matches[1]);
               std::size_t min_leaf = 2;
               if (req.has_param("min_leaf")) {
                 const auto v = req.get_param_value("min_leaf");
                 const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), min_leaf);
                 if (ec != std::errc{} || ptr != v.data() + v.size()) throw ParseError("min_leaf must be a count");
               }
               reply(res, 200, s->rules(min_leaf));
             }));

  server.Post(sid + "/filter", guarded([&](const httplib::Request& req, httplib::Response& res) {
                auto s = sessions.get(req.matches[1]);
                const auto body = body_json(req);
                std::optional<std::vector<FilterRule>> rules;
                if (body.contains("rules")) rules = rules_from_json(body.at("rules"));
                const auto out = s->filter(records_from_body(body), rules);
                Json msgs = Json::array();
                for (const auto& m : out.messages) msgs.push_back(message_to_json(m));
                reply(res, 200, {{"evaluated", out.evaluated}, {"messages", std::move(msgs)}});
              }));

  server.Get(sid + "/snapshot", guarded([&](const httplib::Request& req, httplib::Response& res) {
               reply(res, 200, sessions.get(req.matches[1])->export_snapshot());
             }));

  server.Put(sid + "/snapshot", guarded([&](const httplib::Request& req, httplib::Response& res) {
               auto s = sessions.get(req.matches[1]);
               s->import_snapshot(body_json(req));
               reply(res, 200, {{"imported", true}, {"depth", depth(*s->state()->hierarchy)}});
             }));
}

}  // namespace ighsom
