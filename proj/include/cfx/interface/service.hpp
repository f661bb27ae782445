#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "cfx/importance/importance.hpp"
#include "cfx/models/model.hpp"

namespace cfx {

struct HttpResponse {
  int status = 200;
  std::string body;
};

struct ServiceOptions {
  std::size_t max_k = 50;
  std::size_t max_budget = 200000;
  ImportanceOptions global;        // settings for the cached global report
  std::uint64_t global_seed = 0;
};

// Transport-independent request handling for the JSON API:
//   GET  /health, GET /schema, POST /predict, POST /counterfactuals,
//   POST /importance/local, GET /importance/global
// Errors come back as {error, detail, field?} with 400 / 404 / 422 / 500.
// Safe to call concurrently; the model is read-only and the global report is
// computed once.
class Service {
 public:
  Service(TrainedModel model, std::optional<Dataset> global_data = std::nullopt, ServiceOptions options = {});

  HttpResponse handle(const std::string& method, const std::string& path, const std::string& body) const;

  // Computes the cached global report now instead of on first request.
  void precompute_global() const;

  const TrainedModel& model() const noexcept { return model_; }

 private:
  HttpResponse predict(const std::string& body) const;
  HttpResponse counterfactuals(const std::string& body) const;
  HttpResponse local_importance(const std::string& body) const;
  HttpResponse global_importance() const;

  TrainedModel model_;
  std::optional<Dataset> global_data_;
  ServiceOptions options_;
  mutable std::once_flag global_once_;
  mutable std::shared_ptr<const std::string> global_body_;
  mutable std::optional<HttpResponse> global_error_;
};

}  // namespace cfx
