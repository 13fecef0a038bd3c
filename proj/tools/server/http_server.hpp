#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "server/session.hpp"

namespace httplib {
class Server;
}

namespace specmerge::server {

/// HTTP front end for the tuning loop.
///
///   POST  /sessions                      multipart images (or JSON {"paths": [...]}) -> {id, revision}
///   GET   /sessions/{id}                 -> state
///   PATCH /sessions/{id}/layers/{k}      {coefficient?, sx?, sy?} -> {revision}
///   PUT   /sessions/{id}/engine          {engine} -> {revision}
///   GET   /sessions/{id}/preview         ?format=png|pgm, X-Revision header
///   GET   /sessions/{id}/layers/{k}/thumb
///   GET   /healthz
///
/// Errors are JSON {code, message}. Multipart parts are taken in field-name
/// order; send every image under the same field name to keep upload order.
class TuneServer {
 public:
  TuneServer(SessionStore& store, std::filesystem::path static_root);
  ~TuneServer();

  TuneServer(const TuneServer&) = delete;
  TuneServer& operator=(const TuneServer&) = delete;

  /// Blocks until stop().
  bool listen(const std::string& host, int port);
  /// Binds an ephemeral port and returns it; pair with listen_after_bind().
  int bind_any_port(const std::string& host);
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

 private:
  void install_routes();

  SessionStore& store_;
  std::filesystem::path static_root_;
  std::unique_ptr<httplib::Server> http_;
};

}  // namespace specmerge::server
