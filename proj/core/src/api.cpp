#include "equibench/api.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "equibench/codec.hpp"
#include "equibench/error.hpp"
#include "equibench/views.hpp"

namespace equibench::api {

using nlohmann::json;

namespace {

Response json_response(int status, const json& body) {
  Response r;
  r.status = status;
  r.body = views::dump(body);
  return r;
}

Response error_response(const ApiError& err, const json& errors = nullptr) {
  json body{{"status", err.status}, {"code", err.code}, {"detail", err.detail}};
  if (!errors.is_null()) body["errors"] = errors;
  return json_response(err.status, body);
}

/// Thrown inside handlers to short-circuit with an error body.
struct Abort {
  ApiError error;
};

std::vector<std::string_view> split_path(std::string_view path) {
  std::vector<std::string_view> parts;
  while (!path.empty()) {
    if (path.front() == '/') {
      path.remove_prefix(1);
      continue;
    }
    const auto slash = path.find('/');
    parts.push_back(path.substr(0, slash));
    if (slash == std::string_view::npos) break;
    path.remove_prefix(slash);
  }
  return parts;
}

std::optional<std::string> param(const Request& req, const std::string& name) {
  auto it = req.params.find(name);
  if (it == req.params.end()) return std::nullopt;
  return it->second;
}

double number_param(const Request& req, const std::string& name, std::optional<double> fallback) {
  auto text = param(req, name);
  if (!text || text->empty()) {
    if (fallback) return *fallback;
    throw Abort{{400, "missing_parameter", "query parameter '" + name + "' is required"}};
  }
  char* end = nullptr;
  const double value = std::strtod(text->c_str(), &end);
  if (end != text->c_str() + text->size() || !std::isfinite(value)) {
    throw Abort{{422, "bad_parameter", "'" + name + "' must be a number"}};
  }
  return value;
}

std::size_t count_param(const Request& req, const std::string& name, std::size_t fallback) {
  auto text = param(req, name);
  if (!text || text->empty()) return fallback;
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text->data(), text->data() + text->size(), value);
  if (ec != std::errc{} || ptr != text->data() + text->size()) {
    throw Abort{{422, "bad_parameter", "'" + name + "' must be a non-negative integer"}};
  }
  return value;
}

json errors_json(const std::vector<FieldError>& errors) {
  json out = json::array();
  for (const auto& e : errors) out.push_back(to_json(e));
  return out;
}

}  // namespace

std::optional<std::pair<std::string, int>> parse_address(std::string_view text) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos || colon == 0) return std::nullopt;
  int port = 0;
  const auto digits = text.substr(colon + 1);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
  if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size() || port < 0 ||
      port > 65535) {
    return std::nullopt;
  }
  return std::pair{std::string(text.substr(0, colon)), port};
}

Response Service::handle(const Request& request) const {
  try {
    if (request.method == "GET") return handle_get(request);
    if (request.method == "POST") return handle_post(request);
    return error_response({404, "no_route", "no route for " + request.method + " " + request.path});
  } catch (const Abort& abort) {
    return error_response(abort.error);
  } catch (const NotFoundError& e) {
    return error_response({404, "not_found", e.what()});
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::domain) return error_response({422, "domain", e.what()});
    return error_response({500, std::string(to_string(e.kind())), e.what()});
  } catch (const std::exception& e) {
    return error_response({500, "internal", e.what()});
  }
}

Response Service::handle_get(const Request& request) const {
  const auto view = engine_->view();
  const std::string etag = "\"v" + std::to_string(view->version) + "\"";
  if (request.if_none_match && *request.if_none_match == etag) {
    Response r;
    r.status = 304;
    r.headers = {{"ETag", etag}, {kStateVersionHeader, std::to_string(view->version)}};
    return r;
  }

  const auto& board = engine_->board();
  const auto& state = *view->state;
  const auto parts = split_path(request.path);
  json body;

  if (parts.size() == 1 && parts[0] == "tasks") {
    body = json::array();
    for (const auto& task : engine_->tasks().tasks()) {
      body.push_back(views::task_summary(task, state.task(task.id)));
    }
  } else if (parts.size() == 3 && parts[0] == "tasks") {
    const auto& task = engine_->tasks().resolve(parts[1]);
    const auto what = parts[2];
    if (what == "report") {
      body = views::task_report(board.task_report(state, task.id));
    } else if (what == "underserved") {
      const double tau = number_param(request, "tau", kDefaultTau);
      if (tau < 0.0) throw Abort{{422, "bad_parameter", "tau must be non-negative"}};
      const auto limit = count_param(request, "limit", 10);
      body = views::underserved(board.underserved_ranking(
          state, task.id, tau, limit == 0 ? std::nullopt : std::optional<std::size_t>(limit)));
    } else if (what == "languages") {
      body = views::language_scores(task.id, board.language_score_ranking(state, task.id));
    } else if (what == "diachronic") {
      const double tau = number_param(request, "tau", 1.0);
      if (tau != 0.0 && tau != 1.0) throw Abort{{422, "bad_parameter", "tau must be 0 or 1"}};
      body = views::diachronic(task.id, tau, diachronic_series(board, *view->events, task.id, tau));
    } else if (what == "contributions") {
      const auto kind = parse_beneficiary_kind(param(request, "kind").value_or("system"));
      if (!kind) throw Abort{{422, "bad_parameter", "kind must be 'system' or 'dataset'"}};
      const double tau = number_param(request, "tau", kDefaultTau);
      body = views::contributions(task.id, tau, *kind,
                                  contribution_leaderboard(*view->ledger, task.id, tau, *kind));
    } else {
      throw Abort{{404, "no_route", "no route for GET " + request.path}};
    }
  } else if (parts.size() == 1 && parts[0] == "whatif") {
    const auto task = param(request, "task");
    const auto language = param(request, "language");
    if (!task || !language) {
      throw Abort{{400, "missing_parameter", "'task' and 'language' are required"}};
    }
    const double utility = number_param(request, "utility", std::nullopt);
    if (utility < 0.0 || utility > 1.0) {
      throw Abort{{422, "bad_parameter", "utility must lie in [0, 1]"}};
    }
    const double rank_tau = number_param(request, "tau", kDefaultTau);
    if (rank_tau < 0.0) throw Abort{{422, "bad_parameter", "tau must be non-negative"}};
    body = views::what_if(board.what_if(state, *task, *language, utility, kLedgerTaus, rank_tau));
  } else {
    throw Abort{{404, "no_route", "no route for GET " + request.path}};
  }

  auto response = json_response(200, body);
  response.headers = {{"ETag", etag}, {kStateVersionHeader, std::to_string(view->version)}};
  return response;
}

Response Service::handle_post(const Request& request) const {
  const auto parts = split_path(request.path);
  if (parts.size() != 1 || (parts[0] != "datasets" && parts[0] != "submissions")) {
    throw Abort{{404, "no_route", "no route for POST " + request.path}};
  }
  if (allow_ && !allow_(request)) {
    throw Abort{{400, "not_allowed", "writes from this client are not allowed"}};
  }

  json doc;
  try {
    doc = json::parse(request.body);
  } catch (const json::parse_error& e) {
    throw Abort{{400, "malformed_json", e.what()}};
  }

  EventPayload payload;
  try {
    if (parts[0] == "datasets") {
      payload = dataset_from_json(doc);
    } else {
      payload = submission_from_json(doc);
    }
  } catch (const PayloadError& e) {
    return error_response({422, "invalid_payload", "payload failed schema checks"},
                          errors_json(e.errors()));
  }

  const auto outcome = engine_->submit(std::move(payload));
  if (!outcome.accepted) {
    if (outcome.duplicate()) {
      return error_response({409, "duplicate", "id already present in the log"},
                            errors_json(outcome.report.errors));
    }
    return error_response({422, "validation_failed", "payload failed validation"},
                          errors_json(outcome.report.errors));
  }
  json body{{"seq", outcome.seq}};
  if (!outcome.report.warnings.empty()) body["warnings"] = outcome.report.warnings;
  auto response = json_response(201, body);
  response.headers = {{kStateVersionHeader, std::to_string(outcome.seq)}};
  return response;
}

}  // namespace equibench::api
