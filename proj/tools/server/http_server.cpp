#include "server/http_server.hpp"

#include "httplib.h"
#include "json.hpp"

#include <charconv>
#include <sstream>

#include "specmerge/error.hpp"

namespace specmerge::server {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::unknown_session:
    case ErrorCode::bad_index:
    case ErrorCode::file_not_found:
      return 404;
    case ErrorCode::io_error:
      return 500;
    default:
      return 400;
  }
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view code, const std::string& message) {
  send_json(res, status, {{"code", code}, {"message", message}});
}

std::size_t parse_index(const std::string& text) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::bad_index, "invalid layer index '" + text + "'");
  }
  return value;
}

json parse_body(const httplib::Request& req) {
  try {
    json body = json::parse(req.body);
    if (!body.is_object()) throw Error(ErrorCode::invalid_argument, "request body must be a JSON object");
    return body;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::invalid_argument, std::string("invalid JSON body: ") + e.what());
  }
}

std::optional<double> optional_number(const json& body, const char* key) {
  if (!body.contains(key) || body[key].is_null()) return std::nullopt;
  if (!body[key].is_number()) {
    throw Error(ErrorCode::invalid_argument, std::string("'") + key + "' must be a number");
  }
  return body[key].get<double>();
}

json state_json(const SessionState& state) {
  json layers = json::array();
  for (std::size_t k = 0; k < state.layers.size(); ++k) {
    const auto& layer = state.layers[k];
    layers.push_back({{"index", k},
                      {"name", layer.name},
                      {"coefficient", layer.coefficient},
                      {"sx", layer.shift.sx},
                      {"sy", layer.shift.sy}});
  }
  const auto& first = *state.layers.front().image;
  return {{"id", state.id},
          {"revision", state.revision},
          {"engine", engine_name(state.engine)},
          {"rows", first.rows()},
          {"cols", first.cols()},
          {"layers", layers}};
}

template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const Error& e) {
      send_error(res, http_status(e.code()), error_code_name(e.code()), e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "internal", e.what());
    }
  };
}

std::vector<NamedImage> images_from_request(const httplib::Request& req) {
  std::vector<NamedImage> images;
  if (req.is_multipart_form_data()) {
    for (const auto& [field, part] : req.files) {
      const std::span<const std::uint8_t> bytes(
          reinterpret_cast<const std::uint8_t*>(part.content.data()), part.content.size());
      const std::string name = part.filename.empty() ? field : part.filename;
      try {
        images.push_back({name, decode_image(bytes)});
      } catch (const Error& e) {
        throw Error(e.code(), name + ": " + e.detail());
      }
    }
    return images;
  }
  if (!req.body.empty()) {
    const json body = parse_body(req);
    if (!body.contains("paths") || !body["paths"].is_array()) {
      throw Error(ErrorCode::invalid_argument, "expected multipart images or {\"paths\": [...]}");
    }
    for (const auto& p : body["paths"]) {
      if (!p.is_string()) throw Error(ErrorCode::invalid_argument, "paths must be strings");
      const fs::path path = p.get<std::string>();
      images.push_back({path.filename().string(), load_image(path)});
    }
  }
  return images;
}

}  // namespace

TuneServer::TuneServer(SessionStore& store, fs::path static_root)
    : store_(store), static_root_(std::move(static_root)), http_(std::make_unique<httplib::Server>()) {
  install_routes();
}

TuneServer::~TuneServer() { stop(); }

void TuneServer::install_routes() {
  auto& http = *http_;

  // requests the framework rejects before routing still get a JSON error body
  http.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return httplib::Server::HandlerResponse::Unhandled;
    const bool missing = res.status == 404;
    send_error(res, res.status, missing ? "not_found" : "bad_request",
               missing ? "no such route" : httplib::status_message(res.status));
    return httplib::Server::HandlerResponse::Handled;
  });

  http.Get("/healthz", [this](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, {{"status", "ok"}, {"sessions", store_.size()}});
  });

  http.Post("/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
    auto session = store_.create(images_from_request(req));
    const auto state = session->snapshot();
    send_json(res, 201, {{"id", state.id}, {"revision", state.revision}});
  }));

  http.Get(R"(/sessions/([0-9a-f]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
    send_json(res, 200, state_json(store_.get(req.matches[1])->snapshot()));
  }));

  http.Patch(R"(/sessions/([0-9a-f]+)/layers/([^/]+))",
             guarded([this](const httplib::Request& req, httplib::Response& res) {
               auto session = store_.get(req.matches[1]);
               const std::size_t index = parse_index(req.matches[2]);
               const json body = parse_body(req);
               for (const auto& [key, value] : body.items()) {
                 if (key != "coefficient" && key != "sx" && key != "sy") {
                   throw Error(ErrorCode::invalid_argument, "unknown field '" + key + "'");
                 }
               }
               const auto revision = session->update_layer(index, optional_number(body, "coefficient"),
                                                           optional_number(body, "sx"),
                                                           optional_number(body, "sy"));
               send_json(res, 200, {{"revision", revision}});
             }));

  http.Put(R"(/sessions/([0-9a-f]+)/engine)", guarded([this](const httplib::Request& req, httplib::Response& res) {
    auto session = store_.get(req.matches[1]);
    const json body = parse_body(req);
    if (!body.contains("engine") || !body["engine"].is_string()) {
      throw Error(ErrorCode::invalid_argument, "'engine' must be \"spatial\" or \"frequency\"");
    }
    const auto revision = session->set_engine(parse_engine(body["engine"].get<std::string>()));
    send_json(res, 200, {{"revision", revision}});
  }));

  http.Get(R"(/sessions/([0-9a-f]+)/preview)", guarded([this](const httplib::Request& req, httplib::Response& res) {
    auto session = store_.get(req.matches[1]);
    PreviewFormat format = PreviewFormat::png;
    if (req.has_param("format")) {
      const auto f = req.get_param_value("format");
      if (f == "pgm") {
        format = PreviewFormat::pgm;
      } else if (f != "png") {
        throw Error(ErrorCode::invalid_argument, "format must be png or pgm");
      }
    }
    // a stale ?revision= is answered with the current state (last writer wins)
    const Preview preview = session->preview(format);
    std::ostringstream residue;
    residue << preview.imag_residue;
    std::ostringstream clamped;
    clamped << preview.clamped_fraction;
    res.set_header("X-Revision", std::to_string(preview.revision));
    res.set_header("X-Imag-Residue", residue.str());
    res.set_header("X-Clamped-Fraction", clamped.str());
    res.set_header("Cache-Control", "no-store");
    res.set_content(std::string(preview.bytes.begin(), preview.bytes.end()),
                    format == PreviewFormat::png ? "image/png" : "image/x-portable-graymap");
  }));

  http.Get(R"(/sessions/([0-9a-f]+)/layers/([^/]+)/thumb)",
           guarded([this](const httplib::Request& req, httplib::Response& res) {
             auto session = store_.get(req.matches[1]);
             const Bytes png = session->thumbnail(parse_index(req.matches[2]));
             res.set_content(std::string(png.begin(), png.end()), "image/png");
           }));

  std::error_code ec;
  if (!static_root_.empty() && fs::is_directory(static_root_, ec)) {
    http.set_mount_point("/", static_root_.string());
  }
}

bool TuneServer::listen(const std::string& host, int port) { return http_->listen(host, port); }

int TuneServer::bind_any_port(const std::string& host) { return http_->bind_to_any_port(host); }

bool TuneServer::listen_after_bind() { return http_->listen_after_bind(); }

void TuneServer::stop() {
  if (http_ && http_->is_running()) http_->stop();
}

void TuneServer::wait_until_ready() const { http_->wait_until_ready(); }

}  // namespace specmerge::server
