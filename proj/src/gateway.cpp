/*
 *  Copyright (c) the fedgate authors
 *
 *  Licensed under the Apache License, Version 2.0
 *  See the LICENSE file for further information
 */

#include "fedgate/gateway.hpp"

#include <httplib.h>

#include <nlohmann/json.hpp>
#include <thread>

#include "fedgate/log.hpp"
#include "fedgate/signer.hpp"
#include "fedgate/webdav_xml.hpp"

namespace fedgate {

namespace {

/// Identity headers (trusted only behind insecure_header_auth; production
/// deployments have the TLS terminator inject them).
constexpr const char* kSubjectHeader = "X-Fed-Subject";
constexpr const char* kAttributesHeader = "X-Fed-Attributes";

std::string status_text(int code) {
  switch (code) {
    case 200: return "OK";
    case 207: return "Multi-Status";
    case 302: return "Found";
    case 307: return "Temporary Redirect";
    case 400: return "Bad Request";
    case 401: return "Unauthorized";
    case 403: return "Forbidden";
    case 404: return "Not Found";
    case 500: return "Internal Server Error";
    case 503: return "Service Unavailable";
    default: return "Error";
  }
}

}  // namespace

struct Gateway::Impl {
  httplib::Server server;
  std::thread server_thread;
  bool started = false;
};

Result<std::unique_ptr<Gateway>> Gateway::create(FederationConfig cfg,
                                                 Options opts) {
  GeoDatabase geo;
  if (!cfg.geo_db_path.empty()) {
    auto loaded = GeoDatabase::load(cfg.geo_db_path);
    if (!loaded) return loaded.error();
    geo = std::move(loaded).take();
  }
  auto members = MembershipRegistry::load(cfg.members_path, cfg.privileged_path,
                                          cfg.required_attribute_prefix);
  if (!members) return members.error();

  return std::unique_ptr<Gateway>(new Gateway(
      std::move(cfg), std::move(opts), std::move(geo), std::move(members).take()));
}

Gateway::Gateway(FederationConfig cfg, Options opts, GeoDatabase geo,
                 MembershipRegistry members)
    : impl_(std::make_unique<Impl>()),
      cfg_(std::move(cfg)),
      opts_(std::move(opts)),
      geo_(std::move(geo)),
      members_(std::move(members)),
      metrics_(std::make_shared<Metrics>()),
      registry_(std::make_shared<EndpointRegistry>(cfg_.endpoints, metrics_)),
      l2_(opts_.l2 ? opts_.l2 : make_l2_cache(cfg_.l2_cache)),
      locator_(std::make_unique<Locator>(cfg_, registry_, l2_, metrics_)),
      health_(std::make_unique<HealthMonitor>(registry_, cfg_.probe_timeout,
                                              cfg_.failure_threshold)) {
  auto& svr = impl_->server;
  int threads = opts_.server_threads;
  svr.new_task_queue = [threads] {
    return new httplib::ThreadPool(static_cast<size_t>(threads));
  };

  // PROPFIND is not a method httplib routes natively.
  svr.set_pre_routing_handler([this](const httplib::Request& req,
                                     httplib::Response& res) {
    if (req.method != "PROPFIND") return httplib::Server::HandlerResponse::Unhandled;
    handle_propfind(req, res);
    // PROPFIND request bodies are not consumed; drop the connection
    // rather than let a body corrupt the next request on it.
    res.set_header("Connection", "close");
    return httplib::Server::HandlerResponse::Handled;
  });

  svr.Get(".*", [this](const httplib::Request& req, httplib::Response& res) {
    if (handle_reserved(req, res)) return;
    if (req.method == "HEAD") handle_head(req, res);
    else handle_get(req, res);
  });
  svr.Put(".*", [this](const httplib::Request& req, httplib::Response& res) {
    handle_put(req, res);
  });
  svr.Delete(".*", [this](const httplib::Request& req, httplib::Response& res) {
    handle_delete(req, res);
  });
  svr.Options(".*", [this](const httplib::Request&, httplib::Response& res) {
    res.set_header("DAV", "1");
    res.set_header("Allow", "OPTIONS, GET, HEAD, PUT, DELETE, PROPFIND");
    finish(res, 200, "OPTIONS");
  });
}

Gateway::~Gateway() { stop(); }

std::string Gateway::base_url() const {
  auto host = cfg_.listen_address.substr(0, cfg_.listen_address.rfind(':'));
  return "http://" + host + ":" + std::to_string(port_);
}

Result<int> Gateway::start() {
  auto& svr = impl_->server;
  auto colon = cfg_.listen_address.rfind(':');
  if (colon == std::string::npos)
    return Error{Errc::validation,
                 "listen address must be host:port: " + cfg_.listen_address};
  std::string host = cfg_.listen_address.substr(0, colon);
  int port = 0;
  try {
    port = std::stoi(cfg_.listen_address.substr(colon + 1));
  } catch (...) {
    return Error{Errc::validation, "bad listen port in " + cfg_.listen_address};
  }

  if (port == 0) {
    port_ = svr.bind_to_any_port(host);
    if (port_ <= 0)
      return Error{Errc::io, "cannot bind " + cfg_.listen_address};
  } else {
    if (!svr.bind_to_port(host, port))
      return Error{Errc::io, "cannot bind " + cfg_.listen_address +
                                 " (already in use?)"};
    port_ = port;
  }

  impl_->server_thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->started = true;
  for (int i = 0; i < 200 && !svr.is_running(); ++i)
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  if (!svr.is_running()) {
    stop();
    return Error{Errc::io, "server failed to enter its accept loop"};
  }
  health_->start(cfg_.health_poll_interval);
  FG_LOG(info, "gateway listening on " << host << ":" << port_);
  return port_;
}

void Gateway::stop() {
  if (!impl_->started) return;
  health_->stop();
  impl_->server.stop();
  if (impl_->server_thread.joinable()) impl_->server_thread.join();
  impl_->started = false;
}

}  // namespace fedgate
