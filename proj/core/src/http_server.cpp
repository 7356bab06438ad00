#include <httplib.h>

#include "equibench/api.hpp"
#include "equibench/error.hpp"

namespace equibench::api {

struct HttpServer::Impl {
  explicit Impl(const Service& s) : service(s) {}

  void route(const httplib::Request& req, httplib::Response& res) const {
    Request request;
    request.method = req.method;
    request.path = req.path;
    for (const auto& [key, value] : req.params) request.params.emplace(key, value);
    request.body = req.body;
    if (req.has_header("If-None-Match")) request.if_none_match = req.get_header_value("If-None-Match");

    const auto response = service.handle(request);
    res.status = response.status;
    for (const auto& [key, value] : response.headers) res.set_header(key, value);
    if (!response.body.empty()) res.set_content(response.body, response.content_type);
  }

  const Service& service;
  httplib::Server server;
};

HttpServer::HttpServer(const Service& service) : impl_(std::make_unique<Impl>(service)) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    impl_->route(req, res);
  };
  impl_->server.Get(R"(/.*)", handler);
  impl_->server.Post(R"(/.*)", handler);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  int bound = port == 0 ? impl_->server.bind_to_any_port(host)
                        : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) {
    throw Error(ErrorKind::io, "cannot listen on " + host + ":" + std::to_string(port));
  }
  return bound;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace equibench::api
