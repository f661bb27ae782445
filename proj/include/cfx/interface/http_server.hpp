#pragma once

#include <memory>
#include <string>
#include <thread>

#include "cfx/interface/service.hpp"

namespace httplib {
class Server;
}

namespace cfx {

// Binds a Service to a TCP socket. Every request is forwarded to
// Service::handle; bodies are JSON both ways.
class HttpServer {
 public:
  explicit HttpServer(const Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // port 0 picks a free port; returns the bound port. Serves on a background thread.
  int start(const std::string& host, int port);
  // Blocks until stop() is called from elsewhere.
  void listen(const std::string& host, int port);
  void stop();

 private:
  const Service& service_;
  std::unique_ptr<httplib::Server> server_;
  std::thread worker_;
};

}  // namespace cfx
