#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "equibench/engine.hpp"

namespace equibench::api {

struct Request {
  std::string method;  // "GET", "POST"
  std::string path;    // without query string
  std::map<std::string, std::string> params;
  std::string body;
  std::optional<std::string> if_none_match;
};

struct Response {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
  std::map<std::string, std::string> headers;
};

/// Body of every non-2xx response: {"status","code","detail"[,"errors"]}.
struct ApiError {
  int status = 500;
  std::string code;
  std::string detail;
};

/// Transport-independent request router over an Engine. Reads go to the
/// latest published view; writes go through Engine::submit.
class Service {
 public:
  using Allowlist = std::function<bool(const Request&)>;

  explicit Service(Engine& engine) : engine_(&engine) {}

  /// Optional write gate, off by default. Rejected POSTs get a 400 with
  /// code `not_allowed`.
  void set_allowlist(Allowlist allow) { allow_ = std::move(allow); }

  Response handle(const Request& request) const;

 private:
  Response handle_get(const Request& request) const;
  Response handle_post(const Request& request) const;

  Engine* engine_;
  Allowlist allow_;
};

/// Header carrying the folded log position; also exposed as an ETag.
inline constexpr const char* kStateVersionHeader = "X-State-Version";

/// Parses `host:port` (as found in EQUIBENCH_ADDR).
std::optional<std::pair<std::string, int>> parse_address(std::string_view text);

/// HTTP/1.1 front end for a Service.
class HttpServer {
 public:
  explicit HttpServer(const Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds; port 0 picks a free port. Returns the bound port or throws
  /// Error{io}.
  int bind(const std::string& host, int port);
  /// Blocks serving requests until stop().
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace equibench::api
