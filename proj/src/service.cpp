#include "tabletloom/service.hpp"

#include <httplib.h>

#include <json.hpp>

#include "tabletloom/band_io.hpp"
#include "tabletloom/loom.hpp"
#include "tabletloom/plan.hpp"

namespace tabletloom {

using nlohmann::json;

std::string simulate_source(std::string_view source) { return export_drawdown(simulate(compile(source))); }

namespace {

json diagnostics_json(const Error& e) {
  json out = json::array();
  if (e.diagnostics().empty()) {
    out.push_back({{"code", e.code()}, {"col", 1}, {"line", e.line().value_or(1)}, {"msg", e.what()}});
    return out;
  }
  for (const Diagnostic& d : e.diagnostics()) {
    out.push_back({{"code", d.code}, {"col", d.column}, {"line", d.line}, {"msg", d.message}});
  }
  return out;
}

}  // namespace

HttpReply handle_simulate(std::string_view body) {
  try {
    return HttpReply{200, simulate_source(body)};
  } catch (const Error& e) {
    return HttpReply{400, diagnostics_json(e).dump()};
  }
}

HttpReply handle_examples(const std::filesystem::path& catalog_dir) {
  try {
    json out = json::array();
    for (const CatalogEntry& e : load_catalog(catalog_dir)) {
      out.push_back({{"id", e.id}, {"source", e.source}, {"title", e.title}});
    }
    return HttpReply{200, out.dump()};
  } catch (const Error& e) {
    return HttpReply{500, json{{"code", e.code()}, {"msg", e.what()}}.dump()};
  }
}

HttpReply handle_health() { return HttpReply{200, R"({"status":"ok"})"}; }

struct Service::Impl {
  std::filesystem::path catalog;
  httplib::Server server;
};

namespace {

void reply(httplib::Response& res, const HttpReply& r) {
  res.status = r.status;
  res.set_content(r.body, r.content_type);
}

}  // namespace

Service::Service(std::filesystem::path catalog_dir) : impl_(std::make_unique<Impl>()) {
  impl_->catalog = std::move(catalog_dir);
  httplib::Server& svr = impl_->server;
  svr.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                           {"Access-Control-Allow-Headers", "Content-Type"}});
  svr.Post("/simulate", [](const httplib::Request& req, httplib::Response& res) { reply(res, handle_simulate(req.body)); });
  const std::filesystem::path catalog = impl_->catalog;
  svr.Get("/examples", [catalog](const httplib::Request&, httplib::Response& res) {
    reply(res, handle_examples(catalog));
  });
  svr.Get("/health", [](const httplib::Request&, httplib::Response& res) { reply(res, handle_health()); });
  svr.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
}

Service::~Service() { stop(); }

int Service::bind(const std::string& host, int port) {
  int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error("E_IO", "cannot listen on " + host + ":" + std::to_string(port));
  return bound;
}

void Service::listen() { impl_->server.listen_after_bind(); }

void Service::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace tabletloom
