#include "cfx/interface/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "cfx/cf/generate.hpp"
#include "cfx/error.hpp"
#include "cfx/importance/importance.hpp"
#include "cfx/interface/http_server.hpp"
#include "cfx/interface/service.hpp"
#include "cfx/models/cross_validation.hpp"
#include "cfx/tabular/synth.hpp"

namespace cfx {

using nlohmann::json;

namespace {

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Io, "'" + path + "' is not valid JSON: " + e.what());
  }
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text << '\n';
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
  f << text << '\n';
}

Instance read_instance(const std::string& path, const FeatureSchema& schema) {
  const json j = read_json_file(path);
  if (j.is_object() && j.contains("values")) return instance_from_json(j.at("values"), schema);
  if (j.is_object() && j.contains("origin")) return instance_from_json(j.at("origin"), schema);
  return instance_from_json(j, schema);
}

// "ham10,ham11" and repeated flags both work.
std::vector<std::string> split_names(const std::vector<std::string>& raw) {
  std::vector<std::string> names;
  for (const auto& r : raw) {
    std::stringstream ss(r);
    std::string part;
    while (std::getline(ss, part, ','))
      if (!part.empty()) names.push_back(part);
  }
  return names;
}

struct Options {
  std::uint64_t seed = 0;

  // gen-data
  std::string synth_config;
  std::size_t rows = 0;

  // shared paths
  std::string data, model, out, schema, instance, metrics_out, csv;

  // train
  std::string model_kind = "forest";
  std::string model_config;
  int cv = 5;
  bool smote = false;
  int n_trees = 0;
  int max_depth = 0;

  // explain / importance
  std::optional<int> target;
  int k = 0;
  std::vector<std::string> immutable;
  double lambda1 = 0.5;
  double lambda2 = 1.0;
  std::size_t budget = 20000;
  std::string optimizer = "auto";
  std::string distance_mode = "categorical";
  std::size_t max_instances = 0;

  // serve
  std::string host = "127.0.0.1";
  int port = 8080;
  bool precompute = false;
};

int cmd_gen_data(const Options& o, std::ostream& out) {
  SynthConfig cfg = o.synth_config.empty() ? standard_synth_config() : read_json_file(o.synth_config).get<SynthConfig>();
  if (o.rows > 0) cfg.rows = o.rows;
  const Dataset d = synth_generate(cfg, o.seed);
  if (o.out.empty() || o.out == "-")
    write_csv(out, d);
  else
    save_csv(o.out, d);
  return 0;
}

int cmd_train(const Options& o, std::ostream& out, std::ostream& err) {
  const FeatureSchema schema = o.schema.empty() ? hamd17_schema() : load_schema_json(o.schema);
  const Dataset data = load_csv(o.data, schema);
  ModelConfig cfg;
  if (!o.model_config.empty()) cfg = read_json_file(o.model_config).get<ModelConfig>();
  cfg.kind = parse_model_kind(o.model_kind);
  if (o.smote) cfg.smote = true;
  if (o.n_trees > 0) cfg.forest.n_trees = o.n_trees;
  if (o.max_depth > 0) cfg.forest.max_depth = cfg.tree.max_depth = o.max_depth;

  json metrics{{"model_kind", to_string(cfg.kind)}, {"seed", o.seed}, {"rows", data.size()}, {"config", cfg}};
  if (o.cv > 0) {
    const CrossValidationReport cv = cross_validate(data, cfg, o.cv, o.seed);
    metrics["cv_folds"] = o.cv;
    metrics["cross_validation"] = cv;
    err << "cv accuracy " << cv.mean.accuracy << " f1 " << cv.mean.f1 << '\n';
  }
  const TrainedModel model = train_model(data, cfg, o.seed);
  metrics["training"] = evaluate(model, data);
  if (o.out.empty())
    out << model_to_json(model).dump() << '\n';
  else
    save_model(o.out, model);
  if (!o.metrics_out.empty()) emit(o.metrics_out, metrics.dump(2), out);
  return 0;
}

int cmd_evaluate(const Options& o, std::ostream& out) {
  const TrainedModel model = load_model(o.model);
  const Dataset data = load_csv(o.data, model.schema());
  emit(o.out, json(evaluate(model, data)).dump(2), out);
  return 0;
}

int cmd_explain(const Options& o, std::ostream& out) {
  const TrainedModel model = load_model(o.model);
  CFQuery q;
  q.origin = read_instance(o.instance, model.schema());
  q.target_class = o.target ? *o.target : 1 - model.predict_class(q.origin);
  q.k = o.k > 0 ? o.k : 1;
  q.immutable = split_names(o.immutable);
  q.lambda1 = o.lambda1;
  q.lambda2 = o.lambda2;
  q.budget = o.budget;
  q.seed = o.seed;
  q.optimizer = parse_optimizer(o.optimizer);
  q.distance_mode = parse_distance_mode(o.distance_mode);
  emit(o.out, json(generate_counterfactuals(q, model)).dump(2), out);
  return 0;
}

ImportanceOptions importance_options(const Options& o) {
  ImportanceOptions opt;
  opt.k = o.k > 0 ? o.k : 10;
  opt.immutable = split_names(o.immutable);
  opt.lambda1 = o.lambda1;
  opt.lambda2 = o.lambda2;
  opt.budget = o.budget;
  opt.distance_mode = parse_distance_mode(o.distance_mode);
  return opt;
}

Dataset first_rows(Dataset data, std::size_t n) {
  if (n > 0 && n < data.size()) {
    data.rows.resize(n);
    data.labels.resize(n);
  }
  return data;
}

int cmd_importance(const Options& o, std::ostream& out, std::ostream& err) {
  const TrainedModel model = load_model(o.model);
  const ImportanceOptions opt = importance_options(o);
  ImportanceReport report;
  if (!o.instance.empty()) {
    report = local_importance(read_instance(o.instance, model.schema()), model, opt, o.seed);
  } else if (!o.data.empty()) {
    const Dataset data = first_rows(load_csv(o.data, model.schema()), o.max_instances);
    report = global_importance(data, model, opt, o.seed);
    if (report.failures > 0) err << report.failures << " instance(s) produced no counterfactuals\n";
  } else {
    throw CLI::ValidationError("importance", "one of --instance or --data is required");
  }
  json j = report;
  j["seed"] = o.seed;
  emit(o.out, j.dump(2), out);
  if (!o.csv.empty()) {
    std::ofstream f(o.csv);
    if (!f) throw Error(ErrorKind::Io, "cannot write '" + o.csv + "'");
    write_importance_csv(f, report);
  }
  return 0;
}

int cmd_serve(const Options& o, std::ostream& err) {
  TrainedModel model = load_model(o.model);
  if (!o.schema.empty() && !(load_schema_json(o.schema) == model.schema()))
    throw Error(ErrorKind::SchemaMismatch, "--schema does not match the schema stored in the model");
  std::optional<Dataset> data;
  if (!o.data.empty()) data = first_rows(load_csv(o.data, model.schema()), o.max_instances);
  ServiceOptions so;
  so.global = importance_options(o);
  so.global_seed = o.seed;
  Service service(std::move(model), std::move(data), so);
  if (o.precompute) service.precompute_global();
  HttpServer server(service);
  err << "listening on " << o.host << ':' << o.port << '\n';
  server.listen(o.host, o.port);
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Counterfactual explanations for antidepressant-class classifiers", "cfx"};
  app.require_subcommand(1);
  Options o;

  auto add_seed = [&](CLI::App* c) { c->add_option("--seed", o.seed, "Random seed")->capture_default_str(); };
  auto add_cf_options = [&](CLI::App* c) {
    c->add_option("--immutable", o.immutable, "Features that must not change (comma-separated or repeated)");
    c->add_option("--lambda1", o.lambda1, "Proximity weight")->capture_default_str();
    c->add_option("--lambda2", o.lambda2, "Diversity weight")->capture_default_str();
    c->add_option("--budget", o.budget, "Model evaluations per search")->capture_default_str();
    c->add_option("--distance-mode", o.distance_mode, "categorical | continuous")->capture_default_str();
  };

  auto* gen = app.add_subcommand("gen-data", "Generate a synthetic labelled dataset");
  gen->add_option("--config", o.synth_config, "Generator config JSON (default: standard config)")
      ->check(CLI::ExistingFile);
  gen->add_option("--rows", o.rows, "Override the row count");
  gen->add_option("--out", o.out, "Output CSV (default: stdout)");
  add_seed(gen);

  auto* train = app.add_subcommand("train", "Train a classifier, optionally with k-fold cross-validation");
  train->add_option("--data", o.data, "Training CSV")->required()->check(CLI::ExistingFile);
  train->add_option("--schema", o.schema, "Schema JSON (default: HAM-D-17)")->check(CLI::ExistingFile);
  train->add_option("--model-kind", o.model_kind, "forest | tree | logistic")
      ->check(CLI::IsMember({"forest", "tree", "logistic"}))
      ->capture_default_str();
  train->add_option("--model-config", o.model_config, "Hyper-parameter JSON")->check(CLI::ExistingFile);
  train->add_option("--cv", o.cv, "Folds for cross-validation (0 to skip)")->check(CLI::Range(0, 1000))->capture_default_str();
  train->add_flag("--smote", o.smote, "Balance training folds with SMOTE");
  train->add_option("--n-trees", o.n_trees, "Forest size")->check(CLI::PositiveNumber);
  train->add_option("--max-depth", o.max_depth, "Tree depth limit")->check(CLI::PositiveNumber);
  train->add_option("--out", o.out, "Model JSON (default: stdout)");
  train->add_option("--metrics", o.metrics_out, "Metrics JSON");
  add_seed(train);

  auto* eval = app.add_subcommand("evaluate", "Score a saved model on a labelled CSV");
  eval->add_option("--model", o.model, "Model JSON")->required()->check(CLI::ExistingFile);
  eval->add_option("--data", o.data, "Labelled CSV")->required()->check(CLI::ExistingFile);
  eval->add_option("--out", o.out, "Metrics JSON (default: stdout)");
  add_seed(eval);

  auto* explain = app.add_subcommand("explain", "Generate counterfactuals for one patient");
  explain->add_option("--model", o.model, "Model JSON")->required()->check(CLI::ExistingFile);
  explain->add_option("--instance", o.instance, "Patient JSON")->required()->check(CLI::ExistingFile);
  explain->add_option("--target", o.target, "Target class (default: opposite of the prediction)")
      ->check(CLI::IsMember({0, 1}));
  explain->add_option("--k", o.k, "Number of counterfactuals")->check(CLI::PositiveNumber);
  explain->add_option("--optimizer", o.optimizer, "auto | gradient | evolutionary")->capture_default_str();
  explain->add_option("--out", o.out, "Output JSON (default: stdout)");
  add_cf_options(explain);
  add_seed(explain);

  auto* imp = app.add_subcommand("importance", "Counterfactual-based feature importance");
  imp->add_option("--model", o.model, "Model JSON")->required()->check(CLI::ExistingFile);
  auto* inst_opt = imp->add_option("--instance", o.instance, "Patient JSON (local importance)")->check(CLI::ExistingFile);
  auto* data_opt = imp->add_option("--data", o.data, "CSV of patients (global importance)")->check(CLI::ExistingFile);
  inst_opt->excludes(data_opt);
  imp->add_option("--max-instances", o.max_instances, "Use only the first N rows of --data");
  imp->add_option("--k", o.k, "Counterfactuals per instance (default 10)")->check(CLI::PositiveNumber);
  imp->add_option("--out", o.out, "Report JSON (default: stdout)");
  imp->add_option("--csv", o.csv, "Also write feature,score CSV");
  add_cf_options(imp);
  add_seed(imp);

  auto* serve = app.add_subcommand("serve", "Run the JSON HTTP API");
  serve->add_option("--model", o.model, "Model JSON")->required()->check(CLI::ExistingFile);
  serve->add_option("--schema", o.schema, "Schema JSON; must match the model")->check(CLI::ExistingFile);
  serve->add_option("--data", o.data, "CSV for the global importance report")->check(CLI::ExistingFile);
  serve->add_option("--max-instances", o.max_instances, "Use only the first N rows of --data");
  serve->add_option("--k", o.k, "Counterfactuals per instance for the global report")->check(CLI::PositiveNumber);
  serve->add_option("--host", o.host)->capture_default_str();
  serve->add_option("--port", o.port)->check(CLI::Range(1, 65535))->capture_default_str();
  serve->add_flag("--precompute-global", o.precompute, "Compute the global report before listening");
  add_cf_options(serve);
  add_seed(serve);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  CLI::App* cmd = app.get_subcommands().front();
  err << "cfx " << cmd->get_name() << ": seed=" << o.seed << '\n';
  try {
    if (cmd == gen) return cmd_gen_data(o, out);
    if (cmd == train) return cmd_train(o, out, err);
    if (cmd == eval) return cmd_evaluate(o, out);
    if (cmd == explain) return cmd_explain(o, out);
    if (cmd == imp) return cmd_importance(o, out, err);
    return cmd_serve(o, err);
  } catch (const CLI::ValidationError& e) {
    err << cmd->get_name() << ": " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << cmd->get_name() << " failed: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << cmd->get_name() << " failed: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace cfx
