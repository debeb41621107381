#include "powdiv/model_file.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include <fmt/format.h>

namespace powdiv {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

template <typename T>
T parse_number(const std::string& key, int line, const std::string& text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw ModelFileError(key, line, fmt::format("cannot parse value '{}'", text));
  return value;
}

}  // namespace

ModelFileError::ModelFileError(const std::string& key, int line, const std::string& what)
    : std::runtime_error(fmt::format("line {}: key '{}': {}", line, key, what)),
      key_(key),
      line_(line) {}

ModelDescription parse_model_description(std::istream& in) {
  ModelDescription d;
  auto& m = d.model;
  std::map<std::string, int> seen;

  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view view(raw);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    const std::string text = trim(view);
    if (text.empty()) continue;

    const auto eq = text.find('=');
    if (eq == std::string::npos)
      throw ModelFileError(trim(text), line, "expected 'key = value'");
    const std::string key = trim(std::string_view(text).substr(0, eq));
    const std::string value = trim(std::string_view(text).substr(eq + 1));
    if (key.empty()) throw ModelFileError("", line, "missing key");
    if (seen.contains(key))
      throw ModelFileError(key, line, fmt::format("duplicate key (first set on line {})", seen[key]));
    seen[key] = line;

    auto real = [&] { return parse_number<double>(key, line, value); };
    if (key == "domain_lower")
      m.domain.lower = real();
    else if (key == "domain_upper")
      m.domain.upper = real();
    else if (key == "theta_min")
      m.theta_space.lo = real();
    else if (key == "theta_max")
      m.theta_space.hi = real();
    else if (key == "gamma")
      m.class_config.floor_gamma = real();
    else if (key == "alpha")
      d.alpha = real();
    else if (key == "quad_order")
      d.quad_order = parse_number<int>(key, line, value);
    else if (key == "bound")
      m.class_config.bound = real();
    else if (key == "lipschitz_m")
      m.class_config.lipschitz_M = real();
    else if (key == "lipschitz_grid")
      m.class_config.lipschitz_grid = parse_number<int>(key, line, value);
    else if (key == "p0_a")
      d.p0_a = real();
    else if (key == "p0_mu")
      d.p0_mu = real();
    else
      throw ModelFileError(key, line, "unknown key");
  }

  auto fail = [&](const std::string& key, const std::string& what) {
    const auto it = seen.find(key);
    throw ModelFileError(key, it == seen.end() ? 0 : it->second, what);
  };
  if (!(m.domain.lower < m.domain.upper)) fail("domain_upper", "must exceed domain_lower");
  if (!(m.theta_space.lo < m.theta_space.hi)) fail("theta_max", "must exceed theta_min");
  if (!(m.class_config.floor_gamma >= 0.0)) fail("gamma", "must be >= 0");
  if (!(d.alpha > 0.0 && d.alpha <= 1.0)) fail("alpha", "must lie in (0, 1]");
  if (d.quad_order < 2) fail("quad_order", "must be >= 2");
  if (!(m.class_config.bound > 0.0)) fail("bound", "must be > 0");
  if (!(m.class_config.lipschitz_M > 0.0)) fail("lipschitz_m", "must be > 0");
  if (m.class_config.lipschitz_grid < 2) fail("lipschitz_grid", "must be >= 2");
  return d;
}

ModelDescription load_model_description(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file '" + path + "'");
  return parse_model_description(in);
}

void write_model_description(std::ostream& out, const ModelDescription& d) {
  const auto& m = d.model;
  out << fmt::format("domain_lower = {}\n", m.domain.lower)
      << fmt::format("domain_upper = {}\n", m.domain.upper)
      << fmt::format("theta_min = {}\n", m.theta_space.lo)
      << fmt::format("theta_max = {}\n", m.theta_space.hi)
      << fmt::format("gamma = {}\n", m.class_config.floor_gamma)
      << fmt::format("alpha = {}\n", d.alpha) << fmt::format("quad_order = {}\n", d.quad_order)
      << fmt::format("bound = {}\n", m.class_config.bound)
      << fmt::format("lipschitz_m = {}\n", m.class_config.lipschitz_M)
      << fmt::format("lipschitz_grid = {}\n", m.class_config.lipschitz_grid)
      << fmt::format("p0_a = {}\n", d.p0_a) << fmt::format("p0_mu = {}\n", d.p0_mu);
}

}  // namespace powdiv
