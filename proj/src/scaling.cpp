#include "summatoria/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "summatoria/error.hpp"

namespace summatoria {

ExponentFit fit_exponent(std::span<const ExponentSample> samples) {
  std::vector<std::pair<long double, long double>> xy;
  xy.reserve(samples.size());
  ExponentFit fit;
  for (const auto& s : samples) {
    if (!std::isfinite(s.magnitude) || s.magnitude < 0)
      throw_domain("fit_exponent: magnitudes must be finite and non-negative");
    if (s.magnitude == 0.0 || s.n < 2) {
      ++fit.samples_dropped;
      continue;
    }
    xy.emplace_back(std::log(static_cast<long double>(s.n)),
                    std::log(static_cast<long double>(s.magnitude)));
  }
  if (xy.size() < 3)
    throw_domain("fit_exponent: need at least 3 samples with n >= 2 and magnitude > 0, got " +
                 std::to_string(xy.size()));

  const long double count = static_cast<long double>(xy.size());
  long double mx = 0, my = 0;
  for (const auto& [x, y] : xy) {
    mx += x;
    my += y;
  }
  mx /= count;
  my /= count;
  long double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [x, y] : xy) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0) throw_domain("fit_exponent: all samples share the same n");

  const long double alpha = sxy / sxx;
  const long double intercept = my - alpha * mx;
  long double ss_res = 0, worst = 0;
  for (const auto& [x, y] : xy) {
    const long double r = y - (intercept + alpha * x);
    ss_res += r * r;
    worst = std::max(worst, std::fabs(r));
  }
  fit.alpha = static_cast<double>(alpha);
  fit.log_c = static_cast<double>(intercept);
  // A flat response is fitted perfectly by alpha = 0.
  fit.r_squared = syy > 0 ? static_cast<double>(std::clamp(1 - ss_res / syy, 0.0L, 1.0L)) : 1.0;
  fit.samples_used = xy.size();
  fit.residual_max = static_cast<double>(worst);
  return fit;
}

double SlowGrowthSpec::operator()(double n) const noexcept {
  switch (function) {
    case GrowthFunction::Constant: return parameter;
    case GrowthFunction::Log: return std::log(n);
    case GrowthFunction::LogSquared: {
      const double l = std::log(n);
      return l * l;
    }
    // log(e + log n): positive from n = 1 on and ~ log log n asymptotically.
    case GrowthFunction::IteratedLog: return std::log(std::exp(1.0) + std::log(n));
    case GrowthFunction::Power: return std::pow(n, parameter);
  }
  return 0.0;
}

std::string SlowGrowthSpec::name() const {
  char buf[64];
  switch (function) {
    case GrowthFunction::Constant: std::snprintf(buf, sizeof buf, "const:%.12g", parameter); return buf;
    case GrowthFunction::Log: return "log";
    case GrowthFunction::LogSquared: return "log2";
    case GrowthFunction::IteratedLog: return "loglog";
    case GrowthFunction::Power: std::snprintf(buf, sizeof buf, "pow:%.12g", parameter); return buf;
  }
  return "unknown";
}

std::optional<SlowGrowthSpec> SlowGrowthSpec::parse(std::string_view name) {
  auto with_param = [&](std::string_view prefix, GrowthFunction fn) -> std::optional<SlowGrowthSpec> {
    const std::string text(name.substr(prefix.size()));
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v)) return std::nullopt;
    if (fn == GrowthFunction::Constant && !(v > 0)) return std::nullopt;
    if (fn == GrowthFunction::Power && !(v > 0)) return std::nullopt;
    return SlowGrowthSpec{fn, v, 0.5};
  };
  if (name == "log") return SlowGrowthSpec{GrowthFunction::Log, 1.0, 0.5};
  if (name == "log2") return SlowGrowthSpec{GrowthFunction::LogSquared, 1.0, 0.5};
  if (name == "loglog") return SlowGrowthSpec{GrowthFunction::IteratedLog, 1.0, 0.5};
  if (name == "const") return SlowGrowthSpec{GrowthFunction::Constant, 1.0, 0.5};
  if (name.starts_with("const:")) return with_param("const:", GrowthFunction::Constant);
  if (name.starts_with("pow:")) return with_param("pow:", GrowthFunction::Power);
  return std::nullopt;
}

bool slow_growth_check(const SlowGrowthSpec& spec, std::uint64_t lo, std::uint64_t hi) {
  if (!(spec.epsilon > 0)) throw_domain("slow_growth_check: epsilon must be > 0");
  if (lo == 0 || hi < lo) throw_domain("slow_growth_check: invalid range");
  auto pts = ladder_points(LadderSpec::geometric(), hi);
  pts.push_back(lo);
  for (std::uint64_t n : pts) {
    if (n < lo) continue;
    const double x = static_cast<double>(n);
    if (spec(x) > std::pow(x, spec.epsilon)) return false;
  }
  return true;
}

Envelope normalized_envelope(const DeviationSeries& dev) {
  if (dev.points.empty()) throw_domain("normalized_envelope: no checkpoints");
  Envelope env{-1.0, 0};
  for (const auto& p : dev.points) {
    const double r = std::fabs(to_real(p.value)) / std::sqrt(static_cast<double>(p.n));
    if (r > env.max_ratio) env = {r, p.n};
  }
  return env;
}

CoverageReport chebyshev_bound_coverage(const DeviationSeries& dev, const SlowGrowthSpec& phi,
                                        std::uint64_t from_n) {
  CoverageReport rep{dev.kind, dev.limit, phi, 0, 0, 0.0};
  for (const auto& p : dev.points) {
    if (p.n < from_n) continue;
    const double x = static_cast<double>(p.n);
    const double bound_phi = phi(x);
    if (!(bound_phi > 0))
      throw_domain("chebyshev_bound_coverage: phi(" + std::to_string(p.n) + ") is not positive");
    ++rep.total;
    if (std::fabs(to_real(p.value)) <= std::sqrt(x) * bound_phi) ++rep.satisfied;
  }
  if (rep.total == 0) throw_domain("chebyshev_bound_coverage: no checkpoints in range");
  rep.fraction = static_cast<double>(rep.satisfied) / static_cast<double>(rep.total);
  return rep;
}

}  // namespace summatoria
