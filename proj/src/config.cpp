#include "vistrack/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vistrack {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

float parse_float(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    float x = std::stof(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing");
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad float for " + key + ": " + v);
  }
}

int parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    int x = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing");
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad integer for " + key + ": " + v);
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    unsigned long long x = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing");
    return static_cast<std::uint64_t>(x);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad unsigned for " + key + ": " + v);
  }
}

// "3x3,3x5,5x3"
std::vector<std::array<int, 2>> parse_aspects(const std::string& v) {
  std::vector<std::array<int, 2>> out;
  for (const std::string& part : split(v, ',')) {
    std::size_t x = part.find('x');
    if (x == std::string::npos || x == 0 || x + 1 == part.size())
      throw std::invalid_argument("config: bad kernel aspect: " + part);
    out.push_back({parse_int("kernel_aspects", trim(part.substr(0, x))),
                   parse_int("kernel_aspects", trim(part.substr(x + 1)))});
  }
  return out;
}

std::vector<float> parse_float_list(const std::string& key,
                                    const std::string& v) {
  std::vector<float> out;
  for (const std::string& part : split(v, ','))
    out.push_back(parse_float(key, part));
  return out;
}

std::string format_float(float v) {
  std::ostringstream os;
  os.precision(9);
  os << v;
  return os.str();
}

}  // namespace

const char* to_string(FcbMode mode) {
  switch (mode) {
    case FcbMode::none: return "none";
    case FcbMode::adaptive: return "adaptive";
    case FcbMode::aligned: return "aligned";
  }
  throw std::invalid_argument("unknown fcb mode");
}

FcbMode fcb_mode_from_string(const std::string& s) {
  if (s == "none") return FcbMode::none;
  if (s == "adaptive") return FcbMode::adaptive;
  if (s == "aligned") return FcbMode::aligned;
  throw std::invalid_argument("config: fcb_mode must be none, adaptive, or "
                              "aligned, got: " + s);
}

void validate_config(const PipelineConfig& cfg) {
  auto fail = [](const std::string& why) {
    throw std::invalid_argument("config: " + why);
  };
  if (!(cfg.alpha >= 0) || !std::isfinite(cfg.alpha)) fail("alpha must be finite and >= 0");
  if (!(cfg.beta >= 0) || !std::isfinite(cfg.beta)) fail("beta must be finite and >= 0");
  if (!std::isfinite(cfg.epsilon)) fail("epsilon must be finite");
  if (!(cfg.nms_iou > 0 && cfg.nms_iou < 1)) fail("nms_iou must be in (0,1)");
  if (cfg.top_k <= 0) fail("top_k must be positive");
  if (!(cfg.score_threshold >= 0 && cfg.score_threshold <= 1))
    fail("score_threshold must be in [0,1]");
  if (cfg.corr_side <= 0 || cfg.corr_side % 2 == 0)
    fail("corr_side must be positive and odd");
  if (cfg.kernel_aspects.empty()) fail("kernel_aspects must be non-empty");
  for (const auto& ka : cfg.kernel_aspects) {
    if (ka[0] <= 0 || ka[1] <= 0 || ka[0] % 2 == 0 || ka[1] % 2 == 0)
      fail("kernel aspect dims must be positive and odd");
  }
  if (cfg.anchor_aspects.size() != cfg.kernel_aspects.size())
    fail("kernel_aspects and anchor_aspects must be index-aligned");
  for (float r : cfg.anchor_aspects)
    if (!(r > 0) || !std::isfinite(r)) fail("anchor aspect ratios must be positive");
  if (!(cfg.anchor_scale > 0)) fail("anchor_scale must be positive");
  if (!(cfg.stride > 0)) fail("stride must be positive");
  if (cfg.k_proto <= 0) fail("k_proto must be positive");
  if (cfg.e_dim <= 0) fail("e_dim must be positive");
  if (!(cfg.binarize_threshold > 0 && cfg.binarize_threshold < 1))
    fail("binarize_threshold must be in (0,1)");
}

PipelineConfig parse_config(const std::string& text) {
  PipelineConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                  " is not `key = value`");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::invalid_argument("config: empty key or value on line " +
                                  std::to_string(line_no));

    if (key == "alpha") cfg.alpha = parse_float(key, value);
    else if (key == "beta") cfg.beta = parse_float(key, value);
    else if (key == "epsilon") cfg.epsilon = parse_float(key, value);
    else if (key == "nms_iou") cfg.nms_iou = parse_float(key, value);
    else if (key == "top_k") cfg.top_k = parse_int(key, value);
    else if (key == "score_threshold") cfg.score_threshold = parse_float(key, value);
    else if (key == "corr_side") cfg.corr_side = parse_int(key, value);
    else if (key == "kernel_aspects") cfg.kernel_aspects = parse_aspects(value);
    else if (key == "anchor_aspects") cfg.anchor_aspects = parse_float_list(key, value);
    else if (key == "anchor_scale") cfg.anchor_scale = parse_float(key, value);
    else if (key == "stride") cfg.stride = parse_float(key, value);
    else if (key == "k_proto") cfg.k_proto = parse_int(key, value);
    else if (key == "e_dim") cfg.e_dim = parse_int(key, value);
    else if (key == "fcb_mode") cfg.fcb_mode = fcb_mode_from_string(value);
    else if (key == "binarize_threshold") cfg.binarize_threshold = parse_float(key, value);
    else if (key == "seed") cfg.seed = parse_u64(key, value);
    else throw std::invalid_argument("config: unknown key: " + key);
  }
  validate_config(cfg);
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("config: cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_config(text);
}

std::string serialize_config(const PipelineConfig& cfg) {
  std::ostringstream os;
  os << "alpha = " << format_float(cfg.alpha) << "\n";
  os << "beta = " << format_float(cfg.beta) << "\n";
  os << "epsilon = " << format_float(cfg.epsilon) << "\n";
  os << "nms_iou = " << format_float(cfg.nms_iou) << "\n";
  os << "top_k = " << cfg.top_k << "\n";
  os << "score_threshold = " << format_float(cfg.score_threshold) << "\n";
  os << "corr_side = " << cfg.corr_side << "\n";
  os << "kernel_aspects = ";
  for (std::size_t i = 0; i < cfg.kernel_aspects.size(); ++i) {
    if (i) os << ",";
    os << cfg.kernel_aspects[i][0] << "x" << cfg.kernel_aspects[i][1];
  }
  os << "\n";
  os << "anchor_aspects = ";
  for (std::size_t i = 0; i < cfg.anchor_aspects.size(); ++i) {
    if (i) os << ",";
    os << format_float(cfg.anchor_aspects[i]);
  }
  os << "\n";
  os << "anchor_scale = " << format_float(cfg.anchor_scale) << "\n";
  os << "stride = " << format_float(cfg.stride) << "\n";
  os << "k_proto = " << cfg.k_proto << "\n";
  os << "e_dim = " << cfg.e_dim << "\n";
  os << "fcb_mode = " << to_string(cfg.fcb_mode) << "\n";
  os << "binarize_threshold = " << format_float(cfg.binarize_threshold) << "\n";
  os << "seed = " << cfg.seed << "\n";
  return os.str();
}

void save_config(const std::filesystem::path& path,
                 const PipelineConfig& cfg) {
  std::filesystem::path dir = path.parent_path();
  if (dir.empty()) dir = ".";
  std::filesystem::path tmp = dir / (path.filename().string() + ".tmp");
  {
    std::ofstream os(tmp, std::ios::trunc);
    if (!os)
      throw std::runtime_error("config: cannot open for write: " +
                               tmp.string());
    os << serialize_config(cfg);
    if (!os) throw std::runtime_error("config: write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("config: rename failed: " + path.string());
  }
}

}  // namespace vistrack
