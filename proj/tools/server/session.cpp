#include "server/session.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

#include "cli/commands.hpp"
#include "specmerge/error.hpp"
#include "specmerge/png.hpp"

namespace specmerge::server {

MergeSpec merge_spec_for(const SessionState& state) {
  MergeSpec spec;
  spec.output_policy = OutputPolicy::clamp;
  for (const auto& layer : state.layers) {
    spec.layers.push_back(Layer{*layer.image, layer.shift, layer.coefficient, BoundaryMode::wrap});
  }
  return spec;
}

Session::Session(std::string id, std::vector<SessionLayer> layers) {
  state_.id = std::move(id);
  state_.revision = 1;
  state_.engine = Engine::frequency;
  state_.layers = std::move(layers);
}

SessionState Session::snapshot() const {
  std::lock_guard lock(mutex_);
  return state_;
}

std::uint64_t Session::revision() const {
  std::lock_guard lock(mutex_);
  return state_.revision;
}

void Session::validate_for_engine(const SessionState& state, Engine engine) {
  if (engine != Engine::spatial) return;
  for (std::size_t k = 0; k < state.layers.size(); ++k) {
    const auto& layer = state.layers[k];
    if (!layer.shift.is_integer()) {
      throw Error(ErrorCode::invalid_shift,
                  "layer " + std::to_string(k) + " has a subpixel shift; spatial engine needs integers");
    }
    if (std::abs(layer.shift.sx) >= static_cast<double>(layer.image->rows()) ||
        std::abs(layer.shift.sy) >= static_cast<double>(layer.image->cols())) {
      throw Error(ErrorCode::invalid_shift,
                  "layer " + std::to_string(k) + " shift exceeds the image size");
    }
  }
}

std::uint64_t Session::update_layer(std::size_t index, std::optional<double> coefficient,
                                    std::optional<double> sx, std::optional<double> sy) {
  std::lock_guard lock(mutex_);
  if (index >= state_.layers.size()) {
    throw Error(ErrorCode::bad_index, "layer " + std::to_string(index) + " does not exist");
  }
  SessionState next = state_;
  SessionLayer& layer = next.layers[index];
  if (coefficient) {
    if (!std::isfinite(*coefficient) || *coefficient < 0.0) {
      throw Error(ErrorCode::invalid_coefficient, "coefficient must be finite and >= 0");
    }
    layer.coefficient = *coefficient;
  }
  if (sx) layer.shift.sx = *sx;
  if (sy) layer.shift.sy = *sy;
  if (!std::isfinite(layer.shift.sx) || !std::isfinite(layer.shift.sy)) {
    throw Error(ErrorCode::invalid_shift, "shift must be finite");
  }
  validate_for_engine(next, next.engine);

  ++next.revision;
  state_ = std::move(next);
  cache_.clear();
  return state_.revision;
}

std::uint64_t Session::set_engine(Engine engine) {
  std::lock_guard lock(mutex_);
  validate_for_engine(state_, engine);
  state_.engine = engine;
  ++state_.revision;
  cache_.clear();
  return state_.revision;
}

Preview Session::preview(PreviewFormat format) {
  SessionState state;
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(format); it != cache_.end()) return it->second;
    state = state_;
  }

  const MergeResult result = merge(merge_spec_for(state), state.engine);
  const RawImage quantized = quantize(result.image, kPreviewMaxval).image;

  Preview preview;
  preview.revision = state.revision;
  preview.format = format;
  preview.bytes = format == PreviewFormat::png ? encode_png(quantized) : encode_pgm(quantized, true);
  preview.imag_residue = result.imag_residue;
  preview.clamped_fraction = result.clamped_fraction;

  std::lock_guard lock(mutex_);
  if (state_.revision == state.revision) cache_[format] = preview;
  return preview;
}

Bytes Session::thumbnail(std::size_t index) const {
  std::shared_ptr<const Image> image;
  {
    std::lock_guard lock(mutex_);
    if (index >= state_.layers.size()) {
      throw Error(ErrorCode::bad_index, "layer " + std::to_string(index) + " does not exist");
    }
    image = state_.layers[index].image;
  }
  const std::size_t side = std::max(image->rows(), image->cols());
  const std::size_t factor = (side + kThumbnailMaxSide - 1) / kThumbnailMaxSide;
  const std::size_t rows = (image->rows() + factor - 1) / factor;
  const std::size_t cols = (image->cols() + factor - 1) / factor;

  Image thumb(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      double sum = 0.0;
      std::size_t count = 0;
      for (std::size_t y = r * factor; y < std::min(image->rows(), (r + 1) * factor); ++y)
        for (std::size_t x = c * factor; x < std::min(image->cols(), (c + 1) * factor); ++x) {
          sum += image->at(y, x);
          ++count;
        }
      thumb.at(r, c) = sum / static_cast<double>(count);
    }
  }
  return encode_png(quantize(thumb, 255).image);
}

std::chrono::steady_clock::time_point Session::last_access() const {
  std::lock_guard lock(mutex_);
  return last_access_;
}

void Session::touch(std::chrono::steady_clock::time_point now) {
  std::lock_guard lock(mutex_);
  last_access_ = now;
}

SessionStore::SessionStore(std::chrono::seconds ttl, Clock clock)
    : ttl_(ttl), clock_(std::move(clock)) {}

std::string SessionStore::new_id() {
  static thread_local std::mt19937_64 engine{std::random_device{}()};
  std::ostringstream id;
  id << std::hex << std::setfill('0') << std::setw(16) << engine() << std::setw(4)
     << (++counter_ & 0xFFFF);
  return id.str();
}

std::shared_ptr<Session> SessionStore::create(std::vector<NamedImage> images) {
  if (images.empty()) throw Error(ErrorCode::empty_input, "empty session");
  std::vector<RawImage> raws;
  raws.reserve(images.size());
  for (auto& img : images) raws.push_back(std::move(img.raw));
  auto prepared = cli::prepare_images(raws, NormalizeMode::maxval, AlignPolicy::pad_zero);

  std::vector<SessionLayer> layers;
  for (std::size_t k = 0; k < prepared.size(); ++k) {
    SessionLayer layer;
    layer.name = images[k].name.empty() ? "layer" + std::to_string(k) : images[k].name;
    layer.image = std::make_shared<const Image>(std::move(prepared[k]));
    layers.push_back(std::move(layer));
  }

  evict_idle();
  std::lock_guard lock(mutex_);
  auto session = std::make_shared<Session>(new_id(), std::move(layers));
  session->touch(clock_());
  sessions_[session->snapshot().id] = session;
  return session;
}

std::shared_ptr<Session> SessionStore::get(const std::string& id) {
  evict_idle();
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorCode::unknown_session, id);
  it->second->touch(clock_());
  return it->second;
}

std::size_t SessionStore::evict_idle() {
  const auto now = clock_();
  std::lock_guard lock(mutex_);
  return std::erase_if(sessions_, [&](const auto& kv) { return now - kv.second->last_access() > ttl_; });
}

std::size_t SessionStore::size() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

}  // namespace specmerge::server
