#include "cfx/interface/service.hpp"

#include <json.hpp>

#include "cfx/cf/generate.hpp"
#include "cfx/error.hpp"

namespace cfx {

using nlohmann::json;

namespace {

HttpResponse json_response(int status, const json& body) { return {status, body.dump()}; }

HttpResponse error_response(int status, const std::string& kind, const std::string& detail,
                            const std::optional<std::string>& field = std::nullopt) {
  json body{{"error", kind}, {"detail", detail}};
  if (field) body["field"] = *field;
  return json_response(status, body);
}

int status_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NoCounterfactualFound:
    case ErrorKind::TargetEqualsPrediction:
    case ErrorKind::GenerationFailed:
    case ErrorKind::AllGenerationsFailed:
      return 422;
    case ErrorKind::InvalidInstance:
    case ErrorKind::OutOfRangeValue:
    case ErrorKind::NonIntegerOrdinal:
    case ErrorKind::BadQuery:
    case ErrorKind::BadConfig:
    case ErrorKind::WidthMismatch:
    case ErrorKind::MalformedRow:
      return 400;
    default:
      return 500;
  }
}

HttpResponse from_error(const Error& e) {
  return error_response(status_for(e.kind()), to_string(e.kind()), e.detail(), e.feature());
}

json parse_body(const std::string& body) {
  json j = json::parse(body);  // throws json::parse_error
  if (!j.is_object()) throw Error(ErrorKind::BadQuery, "request body must be a JSON object");
  return j;
}

const json& values_field(const json& j) {
  if (j.contains("values")) return j.at("values");
  if (j.contains("origin")) return j.at("origin");
  throw Error(ErrorKind::BadQuery, "missing instance values", "values");
}

template <typename Fn>
HttpResponse guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const json::parse_error& e) {
    return error_response(400, "MalformedJson", e.what());
  } catch (const json::exception& e) {
    return error_response(400, "MalformedRequest", e.what());
  } catch (const Error& e) {
    return from_error(e);
  } catch (const std::exception& e) {
    return error_response(500, "Internal", e.what());
  }
}

}  // namespace

Service::Service(TrainedModel model, std::optional<Dataset> global_data, ServiceOptions options)
    : model_(std::move(model)), global_data_(std::move(global_data)), options_(std::move(options)) {
  if (global_data_ && !(global_data_->schema == model_.schema()))
    throw Error(ErrorKind::SchemaMismatch, "global-importance dataset does not match the model schema");
}

HttpResponse Service::handle(const std::string& method, const std::string& path, const std::string& body) const {
  if (method == "GET" && path == "/health") return json_response(200, json{{"status", "ok"}});
  if (method == "GET" && path == "/schema") return json_response(200, json(model_.schema()));
  if (method == "POST" && path == "/predict") return predict(body);
  if (method == "POST" && path == "/counterfactuals") return counterfactuals(body);
  if (method == "POST" && path == "/importance/local") return local_importance(body);
  if (method == "GET" && path == "/importance/global") return global_importance();
  return error_response(404, "NotFound", "no route for " + method + " " + path);
}

HttpResponse Service::predict(const std::string& body) const {
  return guarded([&] {
    const json j = parse_body(body);
    const Instance x = instance_from_json(values_field(j), model_.schema());
    const double p = model_.predict_instance(x);
    return json_response(200, json{{"class", class_of(p)}, {"probability", p}});
  });
}

HttpResponse Service::counterfactuals(const std::string& body) const {
  return guarded([&] {
    json j = parse_body(body);
    if (!j.contains("target_class")) {
      const Instance x = instance_from_json(values_field(j), model_.schema());
      j["target_class"] = 1 - model_.predict_class(x);
    }
    const CFQuery q = query_from_json(j, model_.schema());
    if (static_cast<std::size_t>(q.k) > options_.max_k)
      throw Error(ErrorKind::BadQuery, "k exceeds the service limit of " + std::to_string(options_.max_k), "k");
    if (q.budget > options_.max_budget)
      throw Error(ErrorKind::BadQuery, "budget exceeds the service limit of " + std::to_string(options_.max_budget),
                  "budget");
    return json_response(200, json(generate_counterfactuals(q, model_)));
  });
}

HttpResponse Service::local_importance(const std::string& body) const {
  return guarded([&] {
    const json j = parse_body(body);
    // Reuse the query parser for field validation; target_class is implied.
    json qj = j;
    qj.erase("target_class");
    qj["target_class"] = 0;
    const CFQuery q = query_from_json(qj, model_.schema());
    if (static_cast<std::size_t>(q.k) > options_.max_k)
      throw Error(ErrorKind::BadQuery, "k exceeds the service limit of " + std::to_string(options_.max_k), "k");
    if (q.budget > options_.max_budget)
      throw Error(ErrorKind::BadQuery, "budget exceeds the service limit", "budget");
    ImportanceOptions opt;
    opt.k = j.contains("k") ? q.k : 10;
    opt.immutable = q.immutable;
    opt.lambda1 = q.lambda1;
    opt.lambda2 = q.lambda2;
    opt.budget = q.budget;
    opt.distance_mode = q.distance_mode;
    json out = cfx::local_importance(q.origin, model_, opt, q.seed);
    out["seed"] = q.seed;
    return json_response(200, out);
  });
}

void Service::precompute_global() const {
  std::call_once(global_once_, [this] {
    const HttpResponse r = guarded([&] {
      if (!global_data_)
        return error_response(404, "NotConfigured", "service was started without a dataset for global importance");
      json out = cfx::global_importance(*global_data_, model_, options_.global, options_.global_seed);
      out["seed"] = options_.global_seed;
      return json_response(200, out);
    });
    if (r.status == 200)
      global_body_ = std::make_shared<const std::string>(r.body);
    else
      global_error_ = r;
  });
}

HttpResponse Service::global_importance() const {
  precompute_global();
  if (global_body_) return {200, *global_body_};
  return *global_error_;
}

}  // namespace cfx
