#include "cli/manifest.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <set>
#include <sstream>

#include "specmerge/error.hpp"
#include "specmerge/pgm.hpp"

namespace specmerge::cli {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::manifest_error, what); }

void reject_unknown_keys(const YAML::Node& node, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.contains(key)) fail("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& where) {
  if (!node.IsScalar()) fail(where + " must be a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(where + " has an invalid value '" + node.Scalar() + "'");
  }
}

template <typename Parse>
auto enum_value(const YAML::Node& node, const std::string& where, Parse parse) {
  const auto text = scalar<std::string>(node, where);
  try {
    return parse(text);
  } catch (const Error& e) {
    fail(where + ": " + e.detail());
  }
}

NormalizeMode parse_normalize(std::string_view s) {
  if (s == "maxval") return NormalizeMode::maxval;
  if (s == "minmax") return NormalizeMode::minmax;
  throw Error(ErrorCode::invalid_argument, "expected maxval or minmax, got '" + std::string(s) + "'");
}

AlignPolicy parse_align(std::string_view s) {
  if (s == "strict") return AlignPolicy::strict;
  if (s == "pad_zero") return AlignPolicy::pad_zero;
  throw Error(ErrorCode::invalid_argument, "expected strict or pad_zero, got '" + std::string(s) + "'");
}

EngineChoice parse_engine_choice(std::string_view s) {
  if (s == "spatial") return EngineChoice::spatial;
  if (s == "frequency") return EngineChoice::frequency;
  if (s == "both") return EngineChoice::both;
  throw Error(ErrorCode::invalid_argument,
              "expected spatial, frequency or both, got '" + std::string(s) + "'");
}

ManifestLayer parse_layer(const YAML::Node& node, std::size_t index, const fs::path& base_dir) {
  const std::string where = "layers[" + std::to_string(index) + "]";
  if (!node.IsMap()) fail(where + " must be a mapping");
  reject_unknown_keys(node, {"path", "coefficient", "shift", "boundary"}, where);

  ManifestLayer layer;
  if (!node["path"]) fail(where + " is missing 'path'");
  const fs::path p = scalar<std::string>(node["path"], where + ".path");
  layer.path = p.is_absolute() ? p : base_dir / p;

  if (node["coefficient"]) {
    layer.coefficient = scalar<double>(node["coefficient"], where + ".coefficient");
    if (!std::isfinite(layer.coefficient) || layer.coefficient < 0.0) {
      fail(where + ".coefficient must be finite and >= 0");
    }
  }
  if (const auto s = node["shift"]) {
    if (!s.IsSequence() || s.size() != 2) fail(where + ".shift must be a two-element list [sx, sy]");
    layer.shift.sx = scalar<double>(s[0], where + ".shift[0]");
    layer.shift.sy = scalar<double>(s[1], where + ".shift[1]");
    if (!std::isfinite(layer.shift.sx) || !std::isfinite(layer.shift.sy)) {
      fail(where + ".shift must be finite");
    }
  }
  if (node["boundary"]) {
    layer.boundary = enum_value(node["boundary"], where + ".boundary", parse_boundary);
  }
  return layer;
}

}  // namespace

std::string_view engine_choice_name(EngineChoice engine) noexcept {
  switch (engine) {
    case EngineChoice::spatial: return "spatial";
    case EngineChoice::frequency: return "frequency";
    case EngineChoice::both: return "both";
  }
  return "frequency";
}

Manifest parse_manifest(std::string_view yaml_text, const fs::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::Exception& e) {
    fail(std::string("invalid YAML: ") + e.what());
  }
  if (!root.IsMap()) fail("top level must be a mapping");
  reject_unknown_keys(root, {"layers", "normalize", "align", "engine", "normalize_coeffs", "output"},
                      "manifest");

  Manifest m;
  const auto layers = root["layers"];
  if (!layers || !layers.IsSequence() || layers.size() == 0) {
    fail("'layers' must be a non-empty list");
  }
  for (std::size_t i = 0; i < layers.size(); ++i) m.layers.push_back(parse_layer(layers[i], i, base_dir));

  if (root["normalize"]) m.normalize = enum_value(root["normalize"], "normalize", parse_normalize);
  if (root["align"]) m.align = enum_value(root["align"], "align", parse_align);
  if (root["engine"]) m.engine = enum_value(root["engine"], "engine", parse_engine_choice);
  if (root["normalize_coeffs"]) {
    m.normalize_coeffs = scalar<bool>(root["normalize_coeffs"], "normalize_coeffs");
  }

  const auto out = root["output"];
  if (!out || !out.IsMap()) fail("'output' must be a mapping");
  reject_unknown_keys(out, {"path", "policy", "maxval"}, "output");
  if (!out["path"]) fail("output is missing 'path'");
  const fs::path op = scalar<std::string>(out["path"], "output.path");
  m.output.path = op.is_absolute() ? op : base_dir / op;
  if (out["policy"]) m.output.policy = enum_value(out["policy"], "output.policy", parse_policy);
  if (out["maxval"]) {
    const auto maxval = scalar<long long>(out["maxval"], "output.maxval");
    if (maxval < 1 || maxval > 65535) fail("output.maxval must be in [1, 65535]");
    m.output.maxval = static_cast<std::uint32_t>(maxval);
  }

  if (m.engine != EngineChoice::frequency) {
    for (std::size_t i = 0; i < m.layers.size(); ++i) {
      if (!m.layers[i].shift.is_integer()) {
        fail("layers[" + std::to_string(i) + "].shift must be integral for engine=" +
             std::string(engine_choice_name(m.engine)));
      }
    }
  }
  return m;
}

Manifest load_manifest(const fs::path& path) {
  const Bytes bytes = read_file(path);
  const std::string text(bytes.begin(), bytes.end());
  return parse_manifest(text, fs::absolute(path).parent_path());
}

std::string to_yaml(const Manifest& m) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "layers" << YAML::Value << YAML::BeginSeq;
  for (const auto& layer : m.layers) {
    out << YAML::BeginMap;
    out << YAML::Key << "path" << YAML::Value << fs::absolute(layer.path).string();
    out << YAML::Key << "coefficient" << YAML::Value << layer.coefficient;
    out << YAML::Key << "shift" << YAML::Value << YAML::Flow << YAML::BeginSeq << layer.shift.sx
        << layer.shift.sy << YAML::EndSeq;
    out << YAML::Key << "boundary" << YAML::Value << std::string(boundary_name(layer.boundary));
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::Key << "normalize" << YAML::Value
      << (m.normalize == NormalizeMode::maxval ? "maxval" : "minmax");
  out << YAML::Key << "align" << YAML::Value
      << (m.align == AlignPolicy::strict ? "strict" : "pad_zero");
  out << YAML::Key << "engine" << YAML::Value << std::string(engine_choice_name(m.engine));
  out << YAML::Key << "normalize_coeffs" << YAML::Value << m.normalize_coeffs;
  out << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "path" << YAML::Value << fs::absolute(m.output.path).string();
  out << YAML::Key << "policy" << YAML::Value << std::string(policy_name(m.output.policy));
  out << YAML::Key << "maxval" << YAML::Value << m.output.maxval;
  out << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

fs::path output_path_for(const Manifest& manifest, Engine engine) {
  if (manifest.engine != EngineChoice::both) return manifest.output.path;
  fs::path p = manifest.output.path;
  const std::string suffix = engine == Engine::spatial ? ".spatial" : ".frequency";
  return p.parent_path() / (p.stem().string() + suffix + p.extension().string());
}

}  // namespace specmerge::cli
