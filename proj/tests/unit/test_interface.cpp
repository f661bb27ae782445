#include <doctest.h>
#include <httplib.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "cfx/interface/cli.hpp"
#include "cfx/interface/http_server.hpp"
#include "cfx/interface/service.hpp"
#include "cfx/tabular/synth.hpp"

using namespace cfx;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const Dataset& service_data() {
  static const Dataset d = [] {
    auto cfg = standard_synth_config();
    cfg.rows = 400;
    return synth_generate(cfg, 31);
  }();
  return d;
}

const TrainedModel& service_model() {
  static const TrainedModel m = [] {
    ModelConfig mc;
    mc.forest.n_trees = 20;
    return train_model(service_data(), mc, 32);
  }();
  return m;
}

json body_of(const HttpResponse& r) { return json::parse(r.body); }

std::string patient_body(int ham03 = 1, int seed = 5) {
  std::vector<int> v{3, 1, ham03, 1, 1, 0, 2, 1, 3, 2, 1, 0, 2, 1, 1, 0, 1};
  return json{{"values", v}, {"k", 3}, {"seed", seed}}.dump();
}

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("cfx_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

struct CliRun {
  int code;
  std::string out, err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "cfx");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  return json::parse(in);
}

}  // namespace

TEST_CASE("service basic routes") {
  const Service svc(service_model());
  auto r = svc.handle("GET", "/health", "");
  CHECK(r.status == 200);
  CHECK(body_of(r).at("status") == "ok");

  r = svc.handle("GET", "/schema", "");
  CHECK(r.status == 200);
  CHECK(body_of(r).at("features").size() == 17);

  r = svc.handle("POST", "/predict", patient_body());
  REQUIRE(r.status == 200);
  const auto p = body_of(r).at("probability").get<double>();
  CHECK(p >= 0.0);
  CHECK(p <= 1.0);
  CHECK(body_of(r).at("class").get<int>() == class_of(p));

  CHECK(svc.handle("GET", "/nope", "").status == 404);
  CHECK(svc.handle("GET", "/predict", "").status == 404);
}

TEST_CASE("service validation errors name the field") {
  const Service svc(service_model());
  auto r = svc.handle("POST", "/counterfactuals", patient_body(99));
  CHECK(r.status == 400);
  CHECK(body_of(r).at("field") == "ham03");
  CHECK(body_of(r).at("error") == "OutOfRangeValue");

  r = svc.handle("POST", "/predict", "{not json");
  CHECK(r.status == 400);
  CHECK(body_of(r).at("error") == "MalformedJson");

  r = svc.handle("POST", "/counterfactuals", json{{"values", std::vector<int>(17, 0)}, {"k", 0}}.dump());
  CHECK(r.status == 400);
  CHECK(body_of(r).at("field") == "k");

  r = svc.handle("POST", "/counterfactuals", json{{"values", std::vector<int>(17, 0)}, {"k", 500}}.dump());
  CHECK(r.status == 400);
}

TEST_CASE("service counterfactuals are deterministic and echo the seed") {
  const Service svc(service_model());
  const auto a = svc.handle("POST", "/counterfactuals", patient_body(1, 17));
  const auto b = svc.handle("POST", "/counterfactuals", patient_body(1, 17));
  REQUIRE(a.status == 200);
  CHECK(a.body == b.body);
  const auto j = body_of(a);
  CHECK(j.at("query").at("seed") == 17);
  CHECK(j.at("cfs").size() <= 3);
  const int predicted = body_of(svc.handle("POST", "/predict", patient_body())).at("class");
  CHECK(j.at("query").at("target_class") == 1 - predicted);
}

TEST_CASE("service maps unreachable targets to 422") {
  const Service svc(service_model());
  json q = json::parse(patient_body());
  std::vector<std::string> all;
  for (const auto& f : service_model().schema().features()) all.push_back(f.name);
  q["immutable"] = all;
  q["budget"] = 2000;
  const auto r = svc.handle("POST", "/counterfactuals", q.dump());
  CHECK(r.status == 422);
  CHECK(body_of(r).at("error") == "NoCounterfactualFound");
}

TEST_CASE("service importance endpoints") {
  {
    const Service svc(service_model());
    const auto r = svc.handle("GET", "/importance/global", "");
    CHECK(r.status == 404);
  }
  ServiceOptions so;
  so.global.k = 3;
  const Service svc(service_model(), service_data().subset(std::vector<std::size_t>{0, 1, 2, 3}), so);
  const auto g1 = svc.handle("GET", "/importance/global", "");
  REQUIRE(g1.status == 200);
  CHECK(body_of(g1).at("scope") == "global");
  CHECK(svc.handle("GET", "/importance/global", "").body == g1.body);

  const auto l = svc.handle("POST", "/importance/local", patient_body());
  REQUIRE(l.status == 200);
  CHECK(body_of(l).at("scope") == "local");
  CHECK(body_of(l).at("k_per_instance") == 3);
}

TEST_CASE("http server forwards requests over a real socket") {
  const Service svc(service_model());
  HttpServer server(svc);
  const int port = server.start("127.0.0.1", 0);
  REQUIRE(port > 0);
  httplib::Client client("127.0.0.1", port);
  auto res = client.Get("/health");
  REQUIRE(res);
  CHECK(res->status == 200);
  res = client.Post("/predict", patient_body(), "application/json");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(res->get_header_value("Content-Type") == "application/json");
  CHECK(res->body == svc.handle("POST", "/predict", patient_body()).body);
  res = client.Post("/counterfactuals", patient_body(99), "application/json");
  REQUIRE(res);
  CHECK(res->status == 400);
  server.stop();
}

TEST_CASE("cli end-to-end pipeline") {
  TempDir dir;
  {
    std::ofstream f(dir / "synth.json");
    json cfg = standard_synth_config();
    cfg["rows"] = 150;
    f << cfg.dump();
  }
  auto r = cli({"gen-data", "--config", dir / "synth.json", "--seed", "7", "--out", dir / "data.csv"});
  REQUIRE(r.code == 0);
  CHECK(r.err.find("seed=7") != std::string::npos);
  {
    std::ifstream in(dir / "data.csv");
    std::string line;
    std::size_t lines = 0;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 151);
  }

  r = cli({"train", "--data", dir / "data.csv", "--model-kind", "forest", "--cv", "5", "--n-trees", "15", "--seed",
           "3", "--out", dir / "m.json", "--metrics", dir / "metrics.json"});
  REQUIRE(r.code == 0);
  const auto metrics = read_json(dir / "metrics.json");
  CHECK(metrics.at("cross_validation").at("folds").size() == 5);
  CHECK(metrics.at("seed") == 3);

  r = cli({"evaluate", "--model", dir / "m.json", "--data", dir / "data.csv", "--out", dir / "eval.json"});
  REQUIRE(r.code == 0);
  CHECK(read_json(dir / "eval.json").at("accuracy").get<double>() > 0.5);

  {
    std::ofstream f(dir / "p.json");
    f << json{{"values", {3, 1, 1, 1, 1, 0, 2, 1, 3, 2, 1, 0, 2, 1, 1, 0, 1}}}.dump();
  }
  const auto model = load_model(dir / "m.json");
  const Instance origin{{3, 1, 1, 1, 1, 0, 2, 1, 3, 2, 1, 0, 2, 1, 1, 0, 1}};
  const int target = 1 - model.predict_class(origin);
  r = cli({"explain", "--model", dir / "m.json", "--instance", dir / "p.json", "--target", std::to_string(target),
           "--k", "10", "--immutable", "ham10", "--seed", "4", "--out", dir / "cfs.json"});
  REQUIRE(r.code == 0);
  const auto cfs = read_json(dir / "cfs.json");
  CHECK(cfs.at("cfs").size() <= 10);
  for (const auto& cf : cfs.at("cfs")) CHECK(cf.at("values")[9] == 2);

  r = cli({"importance", "--model", dir / "m.json", "--instance", dir / "p.json", "--k", "4", "--out",
           dir / "local.json"});
  REQUIRE(r.code == 0);
  CHECK(read_json(dir / "local.json").at("scope") == "local");

  r = cli({"importance", "--model", dir / "m.json", "--data", dir / "data.csv", "--max-instances", "4", "--k", "3",
           "--out", dir / "global.json", "--csv", dir / "global.csv"});
  REQUIRE(r.code == 0);
  CHECK(read_json(dir / "global.json").at("instances_covered").get<int>() +
            read_json(dir / "global.json").at("failures").get<int>() ==
        4);
  std::ifstream csv(dir / "global.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "feature,score");
}

TEST_CASE("cli exit codes") {
  TempDir dir;
  auto r = cli({});
  CHECK(r.code == 2);
  r = cli({"gen-data", "--bogus-flag", "1"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--bogus-flag") != std::string::npos);
  r = cli({"train", "--data", dir / "missing.csv"});
  CHECK(r.code == 2);
  r = cli({"--help"});
  CHECK(r.code == 0);

  {
    std::ofstream f(dir / "bad.csv");
    f << "ham01,label\n1,0\n";
  }
  r = cli({"train", "--data", dir / "bad.csv"});
  CHECK(r.code == 1);
  CHECK(r.err.find("train failed") != std::string::npos);
  CHECK(r.err.find("MissingColumn") != std::string::npos);
}
