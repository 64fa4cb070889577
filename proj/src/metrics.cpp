#include "mesmoc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "mesmoc/rng.hpp"

namespace mesmoc {

namespace {

constexpr long kMonteCarloSamples = 1000000;
constexpr uint64_t kMonteCarloSeed = 0x9e3779b97f4a7c15ULL;

double sweep_2d(std::vector<Vector> pts, const Vector& ref) {
  std::sort(pts.begin(), pts.end(), [](const Vector& a, const Vector& b) {
    if (a[0] != b[0]) return a[0] > b[0];
    return a[1] > b[1];
  });
  double hv = 0.0;
  double top = ref[1];
  for (const auto& p : pts) {
    if (p[1] > top) {
      hv += (p[0] - ref[0]) * (p[1] - top);
      top = p[1];
    }
  }
  return hv;
}

// Hypervolume-by-slicing-objectives over the last coordinate.
double hso(std::vector<Vector> pts, const Vector& ref) {
  const int k = static_cast<int>(ref.size());
  if (pts.empty()) return 0.0;
  if (k == 2) return sweep_2d(std::move(pts), ref);
  std::sort(pts.begin(), pts.end(),
            [k](const Vector& a, const Vector& b) { return a[k - 1] > b[k - 1]; });
  double hv = 0.0;
  std::vector<Vector> slab;
  slab.reserve(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) {
    slab.push_back(pts[i].head(k - 1));
    const double top = pts[i][k - 1];
    const double bottom = i + 1 < pts.size() ? pts[i + 1][k - 1] : ref[k - 1];
    if (top > bottom) hv += (top - bottom) * hso(slab, ref.head(k - 1));
  }
  return hv;
}

HypervolumeResult monte_carlo(const std::vector<Vector>& pts, const Vector& ref) {
  const int k = static_cast<int>(ref.size());
  Vector hi = pts.front();
  for (const auto& p : pts) hi = hi.cwiseMax(p);
  double box = 1.0;
  for (int j = 0; j < k; ++j) box *= hi[j] - ref[j];
  HypervolumeResult out;
  out.exact = false;
  if (!(box > 0.0)) return out;

  Rng rng(kMonteCarloSeed);
  long hits = 0;
  Vector z(k);
  for (long s = 0; s < kMonteCarloSamples; ++s) {
    for (int j = 0; j < k; ++j) z[j] = rng.uniform(ref[j], hi[j]);
    for (const auto& p : pts) {
      if ((z.array() <= p.array()).all()) {
        ++hits;
        break;
      }
    }
  }
  const double frac = static_cast<double>(hits) / static_cast<double>(kMonteCarloSamples);
  out.value = box * frac;
  out.std_error = box * std::sqrt(frac * (1.0 - frac) / static_cast<double>(kMonteCarloSamples));
  return out;
}

}  // namespace

HypervolumeResult hypervolume(const Matrix& front, const Vector& ref) {
  const int k = static_cast<int>(ref.size());
  if (k < 2) throw std::invalid_argument("hypervolume: need at least two objectives");
  if (front.rows() > 0 && front.cols() != k) {
    throw std::invalid_argument("hypervolume: front width disagrees with the reference point");
  }
  HypervolumeResult out;
  std::vector<Vector> pts;
  pts.reserve(static_cast<size_t>(front.rows()));
  for (Eigen::Index i = 0; i < front.rows(); ++i) {
    if (!front.row(i).allFinite()) throw std::invalid_argument("hypervolume: non-finite point");
    if ((front.row(i).transpose().array() >= ref.array()).all()) {
      pts.push_back(front.row(i).transpose());
    } else {
      ++out.clipped;
    }
  }
  if (pts.empty()) return out;
  if (k <= 4) {
    out.value = hso(std::move(pts), ref);
    return out;
  }
  int clipped = out.clipped;
  out = monte_carlo(pts, ref);
  out.clipped = clipped;
  return out;
}

std::vector<int> nondominated_rows(const Matrix& objectives) {
  const int n = static_cast<int>(objectives.rows());
  std::vector<int> kept;
  for (int i = 0; i < n; ++i) {
    bool dominated = false;
    for (int j = 0; j < n && !dominated; ++j) {
      if (j == i) continue;
      const bool geq = (objectives.row(j).array() >= objectives.row(i).array()).all();
      const bool gt = (objectives.row(j).array() > objectives.row(i).array()).any();
      dominated = geq && gt;
    }
    if (!dominated) kept.push_back(i);
  }
  return kept;
}

double feasible_fraction(const std::vector<bool>& feasible) {
  if (feasible.empty()) return 0.0;
  long count = std::count(feasible.begin(), feasible.end(), true);
  return static_cast<double>(count) / static_cast<double>(feasible.size());
}

}  // namespace mesmoc
