#pragma once

// Local HTTP bridge for the live-coding UI.
//
//   POST /simulate   body: band plan text
//                    200 drawdown JSON | 400 [{"code","col","line","msg"}]
//   GET  /examples   [{"id","source","title"}]
//   GET  /health     200
//
// Handlers hold no state between requests.

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

namespace tabletloom {

/// Compiles and simulates a band plan, returning canonical drawdown JSON.
/// This is the one path shared by `simulate` and `POST /simulate`.
std::string simulate_source(std::string_view source);

struct HttpReply {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

HttpReply handle_simulate(std::string_view body);
HttpReply handle_examples(const std::filesystem::path& catalog_dir);
HttpReply handle_health();

class Service {
 public:
  explicit Service(std::filesystem::path catalog_dir);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds to host:port (port 0 picks a free one). Returns the bound port.
  /// Throws E_IO when the port cannot be bound.
  int bind(const std::string& host, int port);
  /// Serves until stop(). Requires a successful bind().
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace tabletloom
