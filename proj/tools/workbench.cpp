// workbench: interactive GHSOM analysis server and batch pipeline.
//
//   workbench serve --port 8080
//   workbench batch --data records.csv --corpus corpus/ --out results/ [--rules rules.json]

#include <CLI11.hpp>
#include <httplib.h>

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ighsom/errors.hpp"
#include "ighsom/http_api.hpp"
#include "ighsom/session.hpp"

namespace fs = std::filesystem;
using namespace ighsom;

namespace {

httplib::Server* g_server = nullptr;

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw NotFoundError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << content;
}

int serve(const std::string& host, int port) {
  SessionManager sessions;
  httplib::Server server;
  register_routes(server, sessions);
  g_server = &server;
  std::signal(SIGINT, [](int) {
    if (g_server) g_server->stop();
  });
  std::cerr << "workbench listening on " << host << ':' << port << '\n';
  if (!server.listen(host, port)) {
    std::cerr << "error: cannot listen on " << host << ':' << port << '\n';
    return 1;
  }
  return 0;
}

struct BatchOptions {
  fs::path data;
  fs::path corpus;
  fs::path out;
  fs::path rules;
  std::uint64_t seed = 42;
  GrowthParams params;
  std::size_t min_leaf = 2;
};

int batch(const BatchOptions& opt) {
  Session session("batch");
  session.upload_data(read_file(opt.data));
  if (!opt.corpus.empty()) {
    std::vector<std::pair<std::string, std::string>> docs;
    for (const auto& entry : fs::directory_iterator(opt.corpus)) {
      if (entry.path().extension() == ".txt") docs.emplace_back(entry.path().stem().string(), read_file(entry.path()));
    }
    std::sort(docs.begin(), docs.end());
    session.upload_corpus(docs);
  }
  fs::create_directories(opt.out);

  const auto summary = session.train(opt.params, opt.seed);
  write_file(opt.out / "hierarchy.json", summary.dump(2) + "\n");

  const auto extracted = session.rules(opt.min_leaf);
  write_file(opt.out / "tree.txt", extracted.at("tree_text").get<std::string>());
  write_file(opt.out / "tree.json", extracted.at("tree").dump(2) + "\n");
  write_file(opt.out / "rules.json", extracted.at("rules").dump(2) + "\n");

  std::optional<std::vector<FilterRule>> rules;
  if (!opt.rules.empty()) {
    const auto text = read_file(opt.rules);
    const auto first = text.find_first_not_of(" \t\r\n");
    rules = first != std::string::npos && text[first] == '['
                ? rules_from_json(Json::parse(text))
                : parse_rules_text(text);
  }
  const auto state = session.state();
  const auto messages_path = opt.out / "messages.jsonl";
  fs::remove(messages_path);
  JsonLinesFileSink sink(messages_path);
  const auto outcome = session.filter(state->records, rules, &sink);

  write_file(opt.out / "snapshot.json", session.export_snapshot().dump() + "\n");
  write_file(opt.out / "records.kml", export_kml(state->records));

  std::cout << "records:   " << state->records.size() << '\n'
            << "depth:     " << summary.at("depth") << '\n'
            << "maps:      " << summary.at("maps") << '\n'
            << "rules:     " << extracted.at("rules").size() << '\n'
            << "messages:  " << outcome.messages.size() << " of " << outcome.evaluated << '\n'
            << "output:    " << opt.out.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interactive GHSOM workbench"};
  app.require_subcommand(1);

  std::string host = "0.0.0.0";
  int port = 8080;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP+JSON session server");
  serve_cmd->add_option("--host", host, "Bind address");
  serve_cmd->add_option("--port", port, "Listen port")->check(CLI::Range(1, 65535));

  BatchOptions opt;
  auto* batch_cmd = app.add_subcommand("batch", "Train, extract rules and filter without the UI");
  batch_cmd->add_option("--data", opt.data, "Record CSV (no,lat,lon,alt,name,evaluation,comment)")
      ->required()
      ->check(CLI::ExistingFile);
  batch_cmd->add_option("--corpus", opt.corpus, "Directory of .txt corpus documents")->check(CLI::ExistingDirectory);
  batch_cmd->add_option("--out", opt.out, "Output directory")->required();
  batch_cmd->add_option("--rules", opt.rules, "Rule file, JSON list or IF ... THEN text; default: extracted rules")
      ->check(CLI::ExistingFile);
  batch_cmd->add_option("--seed", opt.seed, "Training seed");
  batch_cmd->add_option("--tau1", opt.params.tau1, "Horizontal growth threshold");
  batch_cmd->add_option("--tau2", opt.params.tau2, "Vertical growth threshold");
  batch_cmd->add_option("--alpha", opt.params.alpha, "Stratification stop ratio");
  batch_cmd->add_option("--beta", opt.params.beta, "Error-driven insertion factor");
  batch_cmd->add_option("--lambda", opt.params.lambda, "Epochs per growth step");
  batch_cmd->add_option("--max-depth", opt.params.max_depth, "Maximum number of map layers");
  batch_cmd->add_option("--min-leaf", opt.min_leaf, "Minimum instances per decision-tree leaf");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*serve_cmd) return serve(host, port);
    if (*batch_cmd) return batch(opt);
  } catch (const IngestError& e) {
    std::cerr << "error: " << e.what() << '\n';
    for (const auto& d : e.diagnostics()) std::cerr << "  line " << d.line << ": " << d.message << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
