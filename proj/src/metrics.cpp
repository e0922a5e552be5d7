#include "despeckle/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "despeckle/errors.hpp"

namespace despeckle {

namespace {

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

Moments moments(std::span<const double> v) {
  Moments m;
  if (v.empty()) return m;
  double sum = 0.0;
  for (double x : v) sum += x;
  m.mean = sum / static_cast<double>(v.size());
  if (v.size() < 2) return m;
  double ss = 0.0;
  for (double x : v) ss += (x - m.mean) * (x - m.mean);
  m.variance = ss / static_cast<double>(v.size() - 1);
  return m;
}

void require_same_shape(const IntensityRaster& a, const auto& b, const char* what) {
  if (!a.same_shape(b)) throw DomainError(std::string(what) + ": raster shapes differ");
}

constexpr std::pair<MetricFlag, const char*> kFlagNames[] = {
    {kFlagEnlDegenerate, "nel_degenerate"},
    {kFlagQDegenerate, "q_degenerate"},
    {kFlagBetaDegenerate, "beta_degenerate"},
    {kFlagFailed, "failed"},
};

}  // namespace

std::string format_flags(std::uint32_t flags) {
  std::string out;
  for (const auto& [bit, name] : kFlagNames) {
    if (!(flags & bit)) continue;
    if (!out.empty()) out += '|';
    out += name;
  }
  return out;
}

std::uint32_t parse_flags(const std::string& text) {
  std::uint32_t flags = 0;
  std::istringstream in(text);
  std::string token;
  while (std::getline(in, token, '|')) {
    if (token.empty()) continue;
    bool known = false;
    for (const auto& [bit, name] : kFlagNames) {
      if (token == name) {
        flags |= bit;
        known = true;
      }
    }
    if (!known) throw DomainError("unknown record flag '" + token + "'");
  }
  return flags;
}

double enl(std::span<const double> values) {
  if (values.size() < 2) throw DomainError("enl: need at least two values");
  const Moments m = moments(values);
  if (!(m.variance > 0.0)) throw DegenerateSampleError("enl: zero variance");
  return m.mean * m.mean / m.variance;
}

double line_preservation(const IntensityRaster& filtered, const IntensityRaster& truth,
                         const LabelRaster& labels) {
  require_same_shape(filtered, truth, "line_preservation");
  require_same_shape(filtered, labels, "line_preservation");
  double sum = 0.0;
  std::size_t count = 0;
  const auto lab = labels.data();
  const auto f = filtered.data();
  const auto t = truth.data();
  for (std::size_t i = 0; i < lab.size(); ++i) {
    if (lab[i] != Label::line) continue;
    sum += std::abs(f[i] - t[i]) / t[i];
    ++count;
  }
  if (count == 0) throw DomainError("line_preservation: no line pixels");
  return sum / static_cast<double>(count);
}

double edge_gradient(const IntensityRaster& filtered, const LabelRaster& labels) {
  require_same_shape(filtered, labels, "edge_gradient");
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t r = 0; r < labels.height(); ++r) {
    for (std::size_t c = 0; c < labels.width(); ++c) {
      if (labels(r, c) != Label::edge_band) continue;
      const auto ri = static_cast<std::ptrdiff_t>(r);
      const auto ci = static_cast<std::ptrdiff_t>(c);
      const double gx = 0.5 * (filtered.mirrored(ri, ci + 1) - filtered.mirrored(ri, ci - 1));
      const double gy = 0.5 * (filtered.mirrored(ri + 1, ci) - filtered.mirrored(ri - 1, ci));
      sum += std::hypot(gx, gy);
      ++count;
    }
  }
  if (count == 0) throw DomainError("edge_gradient: no edge-band pixels");
  return sum / static_cast<double>(count);
}

double edge_variance(const IntensityRaster& filtered, const LabelRaster& labels) {
  require_same_shape(filtered, labels, "edge_variance");
  std::size_t r0 = labels.height(), r1 = 0, c0 = labels.width(), c1 = 0;
  bool any_block = false;
  for (std::size_t r = 0; r < labels.height(); ++r) {
    for (std::size_t c = 0; c < labels.width(); ++c) {
      if (labels(r, c) != Label::block) continue;
      any_block = true;
      r0 = std::min(r0, r);
      r1 = std::max(r1, r);
      c0 = std::min(c0, c);
      c1 = std::max(c1, c);
    }
  }
  if (!any_block) throw DomainError("edge_variance: no block pixels to locate the edge");
  const std::size_t h = PhantomSpec::kEdgeHalfWidth;
  r0 = r0 >= h ? r0 - h : 0;
  c0 = c0 >= h ? c0 - h : 0;
  r1 += h;
  c1 += h;
  std::vector<double> band;
  for (std::size_t r = r0; r <= r1 && r < labels.height(); ++r) {
    for (std::size_t c = c0; c <= c1 && c < labels.width(); ++c) {
      if (labels(r, c) == Label::edge_band) band.push_back(filtered(r, c));
    }
  }
  if (band.size() < 2) throw DomainError("edge_variance: empty edge band");
  return moments(band).variance;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("pearson: need two equal-length sequences");
  const Moments mx = moments(x);
  const Moments my = moments(y);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx.mean;
    const double dy = y[i] - my.mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) throw DegenerateSampleError("pearson: zero variance");
  const double rho = sxy / std::sqrt(sxx * syy);
  return std::clamp(rho, -1.0, 1.0);
}

double q_index(const IntensityRaster& x, const IntensityRaster& y) {
  require_same_shape(x, y, "q_index");
  if (x.size() < 2) throw DomainError("q_index: need at least two pixels");
  const auto xs = x.data();
  const auto ys = y.data();
  const Moments mx = moments(xs);
  const Moments my = moments(ys);
  if (!(mx.variance > 0.0) || !(my.variance > 0.0)) throw DegenerateSampleError("q_index: zero variance");
  const double denom_mean = mx.mean * mx.mean + my.mean * my.mean;
  if (!(denom_mean > 0.0)) throw DegenerateSampleError("q_index: zero means");
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) sxy += (xs[i] - mx.mean) * (ys[i] - my.mean);
  sxy /= static_cast<double>(xs.size() - 1);
  const double sx = std::sqrt(mx.variance);
  const double sy = std::sqrt(my.variance);
  const double correlation = std::clamp(sxy / (sx * sy), -1.0, 1.0);
  const double luminance = 2.0 * mx.mean * my.mean / denom_mean;
  const double contrast = 2.0 * sx * sy / (mx.variance + my.variance);
  return correlation * luminance * contrast;
}

IntensityRaster laplacian(const IntensityRaster& image) {
  if (image.width() < 3 || image.height() < 3) throw DomainError("laplacian: raster must be at least 3x3");
  IntensityRaster out(image.width(), image.height());
  for (std::size_t r = 0; r < image.height(); ++r) {
    for (std::size_t c = 0; c < image.width(); ++c) {
      const auto ri = static_cast<std::ptrdiff_t>(r);
      const auto ci = static_cast<std::ptrdiff_t>(c);
      out(r, c) = image.mirrored(ri - 1, ci) + image.mirrored(ri + 1, ci) + image.mirrored(ri, ci - 1) +
                  image.mirrored(ri, ci + 1) - 4.0 * image(r, c);
    }
  }
  return out;
}

double beta_rho(const IntensityRaster& x, const IntensityRaster& y) {
  require_same_shape(x, y, "beta_rho");
  return pearson(laplacian(x).data(), laplacian(y).data());
}

MetricsRecord compute_metrics(const IntensityRaster& filtered, const Phantom& phantom,
                              const PhantomSpec& spec) {
  MetricsRecord rec;
  try {
    rec.nel = enl(extract_rect(filtered, spec.enl_patch()));
  } catch (const DegenerateSampleError&) {
    rec.nel = std::numeric_limits<double>::infinity();
    rec.flags |= kFlagEnlDegenerate;
  }
  rec.line_pres = line_preservation(filtered, phantom.truth, phantom.labels);
  rec.edge_grad = edge_gradient(filtered, phantom.labels);
  rec.edge_var = edge_variance(filtered, phantom.labels);
  try {
    rec.q_index = q_index(filtered, phantom.truth);
  } catch (const DegenerateSampleError&) {
    rec.q_index = std::numeric_limits<double>::quiet_NaN();
    rec.flags |= kFlagQDegenerate;
  }
  try {
    rec.beta_rho = beta_rho(filtered, phantom.truth);
  } catch (const DegenerateSampleError&) {
    rec.beta_rho = std::numeric_limits<double>::quiet_NaN();
    rec.flags |= kFlagBetaDegenerate;
  }
  return rec;
}

}  // namespace despeckle
