#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "specmerge/image.hpp"
#include "specmerge/merge.hpp"
#include "specmerge/pgm.hpp"

namespace specmerge::server {

struct NamedImage {
  std::string name;
  RawImage raw;
};

struct SessionLayer {
  std::string name;
  std::shared_ptr<const Image> image;  // normalized and padded, never mutated
  double coefficient = 1.0;
  Shift shift{};
};

/// Consistent copy of a session's tuning state at one revision.
struct SessionState {
  std::string id;
  std::uint64_t revision = 0;
  Engine engine = Engine::frequency;
  std::vector<SessionLayer> layers;
};

enum class PreviewFormat { png, pgm };

struct Preview {
  std::uint64_t revision = 0;
  PreviewFormat format = PreviewFormat::png;
  Bytes bytes;
  double imag_residue = 0;
  double clamped_fraction = 0;
};

inline constexpr std::uint32_t kPreviewMaxval = 255;
inline constexpr std::size_t kThumbnailMaxSide = 128;

/// Merge description for a state: wrap boundaries, clamp policy, raw
/// coefficients. Identical to what cmd_merge builds from the equivalent
/// manifest.
MergeSpec merge_spec_for(const SessionState& state);

/// One tuning session. Mutations serialize on an internal mutex and bump
/// the revision; previews render from a snapshot taken under that mutex.
class Session {
 public:
  Session(std::string id, std::vector<SessionLayer> layers);

  SessionState snapshot() const;
  std::uint64_t revision() const;

  /// Throws bad_index, invalid_coefficient or invalid_shift; on error the
  /// state and revision are left unchanged.
  std::uint64_t update_layer(std::size_t index, std::optional<double> coefficient,
                             std::optional<double> sx, std::optional<double> sy);
  std::uint64_t set_engine(Engine engine);

  /// Renders the current state (cached per revision and format).
  Preview preview(PreviewFormat format);

  /// Box-downsampled PNG of one layer, longest side <= kThumbnailMaxSide.
  Bytes thumbnail(std::size_t index) const;

  std::chrono::steady_clock::time_point last_access() const;
  void touch(std::chrono::steady_clock::time_point now);

 private:
  static void validate_for_engine(const SessionState& state, Engine engine);

  mutable std::mutex mutex_;
  SessionState state_;
  std::map<PreviewFormat, Preview> cache_;
  std::chrono::steady_clock::time_point last_access_{};
};

/// In-memory session registry with idle eviction.
class SessionStore {
 public:
  using Clock = std::function<std::chrono::steady_clock::time_point()>;

  explicit SessionStore(std::chrono::seconds ttl = std::chrono::minutes(30),
                        Clock clock = [] { return std::chrono::steady_clock::now(); });

  /// Normalizes (maxval) and pads all images to a common size. Throws
  /// empty_input for no images.
  std::shared_ptr<Session> create(std::vector<NamedImage> images);

  /// Throws unknown_session. Refreshes the idle timer.
  std::shared_ptr<Session> get(const std::string& id);

  std::size_t evict_idle();
  std::size_t size() const;

 private:
  std::string new_id();

  std::chrono::seconds ttl_;
  Clock clock_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t counter_ = 0;
};

}  // namespace specmerge::server
