#include "qcstat/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qcstat/error.hpp"
#include "qcstat/parallel.hpp"

namespace qcstat {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Bracket {
  double lo;
  double hi;
  std::size_t count_lo;
  std::size_t count_hi;
};

bool collapsed(double lo, double hi, double abs_floor) {
  return hi - lo <= 2.0 * kEps * std::max(std::abs(lo), std::abs(hi)) + abs_floor;
}

}  // namespace

// Sturm sweeps carry a division in a loop-carried dependency, so a single
// sweep is latency bound. Evaluating several shifts per sweep keeps the
// divider busy; every phase below works on batches of kLanes shifts.
constexpr std::size_t kLanes = 8;

class TridiagonalEigensolver {
 public:
  explicit TridiagonalEigensolver(const SymmetricTridiagonal& m) : m_(m) {
    const auto [lo, hi] = m.gershgorin_bounds();
    // Sturm counts are backward stable: an eigenvalue is pinned down to
    // about eps * ||T|| and no further (the LAPACK bisection tolerance).
    abs_floor_ = 4.0 * m.pivot_min_ + 2.0 * kEps * std::max(std::abs(lo), std::abs(hi));
  }

  // Sturm counts at up to kLanes shifts; unused lanes repeat x[0].
  void counts(const double* x, std::size_t lanes, std::size_t* out) const {
    const auto& d = m_.diagonal_;
    const auto& e2 = m_.off_sq_;
    const double pivmin = m_.pivot_min_;
    double shift[kLanes], q[kLanes];
    std::size_t neg[kLanes] = {};
    for (std::size_t l = 0; l < kLanes; ++l) shift[l] = x[l < lanes ? l : 0];
    for (std::size_t l = 0; l < kLanes; ++l) {
      q[l] = d[0] - shift[l];
      if (std::abs(q[l]) < pivmin) q[l] = -pivmin;
      neg[l] += q[l] < 0.0;
    }
    for (std::size_t i = 1; i < d.size(); ++i) {
      const double di = d[i];
      const double ei = e2[i - 1];
      for (std::size_t l = 0; l < kLanes; ++l) {
        double v = di - shift[l] - ei / q[l];
        v = std::abs(v) < pivmin ? -pivmin : v;
        neg[l] += v < 0.0;
        q[l] = v;
      }
    }
    for (std::size_t l = 0; l < lanes; ++l) out[l] = neg[l];
  }

  // Sturm counts plus d/dx log|det(T - x)| at up to kLanes shifts.
  void counts_and_log_derivatives(const double* x, std::size_t lanes, std::size_t* out,
                                  double* ratio_out) const {
    const auto& d = m_.diagonal_;
    const auto& e2 = m_.off_sq_;
    const double pivmin = m_.pivot_min_;
    double shift[kLanes], q[kLanes], dq[kLanes], ratio[kLanes];
    std::size_t neg[kLanes] = {};
    for (std::size_t l = 0; l < kLanes; ++l) {
      shift[l] = x[l < lanes ? l : 0];
      q[l] = d[0] - shift[l];
      if (std::abs(q[l]) < pivmin) q[l] = -pivmin;
      dq[l] = -1.0;
      ratio[l] = 0.0;
      neg[l] += q[l] < 0.0;
    }
    for (std::size_t i = 1; i < d.size(); ++i) {
      const double di = d[i];
      const double ei = e2[i - 1];
      for (std::size_t l = 0; l < kLanes; ++l) {
        const double r = 1.0 / q[l];
        ratio[l] += dq[l] * r;
        const double t = ei * r;
        dq[l] = -1.0 + t * dq[l] * r;
        double v = di - shift[l] - t;
        v = std::abs(v) < pivmin ? -pivmin : v;
        neg[l] += v < 0.0;
        q[l] = v;
      }
    }
    for (std::size_t l = 0; l < lanes; ++l) {
      out[l] = neg[l];
      ratio_out[l] = ratio[l] + dq[l] / q[l];
    }
  }

  // Safeguarded Newton on up to kLanes isolated eigenvalues in lockstep.
  void refine(const Bracket* b, std::size_t lanes, double* out) const {
    double lo[kLanes], hi[kLanes], x[kLanes], ratio[kLanes];
    std::size_t count[kLanes];
    bool done[kLanes] = {};
    for (std::size_t l = 0; l < lanes; ++l) {
      lo[l] = b[l].lo;
      hi[l] = b[l].hi;
      x[l] = 0.5 * (lo[l] + hi[l]);
      out[l] = x[l];
    }
    for (int iter = 0; iter < 200; ++iter) {
      // Pack the lanes still running.
      double xs[kLanes];
      std::size_t map[kLanes];
      std::size_t active = 0;
      for (std::size_t l = 0; l < lanes; ++l) {
        if (!done[l]) {
          xs[active] = x[l];
          map[active++] = l;
        }
      }
      if (active == 0) return;
      std::size_t c[kLanes];
      double r[kLanes];
      counts_and_log_derivatives(xs, active, c, r);
      for (std::size_t a = 0; a < active; ++a) {
        count[map[a]] = c[a];
        ratio[map[a]] = r[a];
      }
      for (std::size_t a = 0; a < active; ++a) {
        const std::size_t l = map[a];
        if (count[l] <= b[l].count_lo) {
          lo[l] = x[l];
        } else {
          hi[l] = x[l];
        }
        if (collapsed(lo[l], hi[l], abs_floor_)) {
          out[l] = 0.5 * (lo[l] + hi[l]);
          done[l] = true;
          continue;
        }
        double next = x[l] - 1.0 / ratio[l];
        if (!std::isfinite(next) || !(next > lo[l] && next < hi[l])) {
          next = 0.5 * (lo[l] + hi[l]);
        }
        if (std::abs(next - x[l]) <= abs_floor_) {
          out[l] = next;
          done[l] = true;
          continue;
        }
        x[l] = next;
        out[l] = next;
      }
    }
  }

  std::vector<double> lowest(std::size_t count) const {
    const std::size_t n = m_.size();
    auto [lo, hi] = m_.gershgorin_bounds();
    const double pad = 2.0 * kEps * std::max(std::abs(lo), std::abs(hi)) +
                       4.0 * m_.pivot_min_;
    lo -= pad;
    hi += pad;

    std::vector<double> values(count, std::numeric_limits<double>::quiet_NaN());
    std::vector<Bracket> isolated;
    std::vector<Bracket> pending{{lo, hi, 0, n}};
    while (!pending.empty()) {
      // Settle what needs no count; split the rest, kLanes per sweep.
      std::vector<Bracket> split;
      for (const Bracket& b : pending) {
        if (b.count_lo >= count || b.count_hi == b.count_lo) continue;
        if (b.count_hi - b.count_lo == 1) {
          isolated.push_back(b);
          continue;
        }
        const double mid = 0.5 * (b.lo + b.hi);
        if (collapsed(b.lo, b.hi, abs_floor_) || mid <= b.lo || mid >= b.hi) {
          // Cluster below resolution: every member gets the midpoint.
          for (std::size_t k = b.count_lo; k < std::min(b.count_hi, count); ++k) {
            values[k] = mid;
          }
          continue;
        }
        split.push_back(b);
      }
      pending.clear();
      std::vector<std::size_t> mids_count(split.size());
      std::vector<double> mids(split.size());
      for (std::size_t i = 0; i < split.size(); ++i) {
        mids[i] = 0.5 * (split[i].lo + split[i].hi);
      }
      const std::size_t batches = (split.size() + kLanes - 1) / kLanes;
      parallel_for(batches, [&](std::size_t k) {
        const std::size_t first = k * kLanes;
        const std::size_t lanes = std::min(kLanes, split.size() - first);
        counts(&mids[first], lanes, &mids_count[first]);
      });
      for (std::size_t i = 0; i < split.size(); ++i) {
        const Bracket& b = split[i];
        pending.push_back({b.lo, mids[i], b.count_lo, mids_count[i]});
        pending.push_back({mids[i], b.hi, mids_count[i], b.count_hi});
      }
    }
    const std::size_t batches = (isolated.size() + kLanes - 1) / kLanes;
    parallel_for(batches, [&](std::size_t k) {
      const std::size_t first = k * kLanes;
      const std::size_t lanes = std::min(kLanes, isolated.size() - first);
      double out[kLanes];
      refine(&isolated[first], lanes, out);
      for (std::size_t l = 0; l < lanes; ++l) values[isolated[first + l].count_lo] = out[l];
    });
    std::sort(values.begin(), values.end());
    return values;
  }

 private:
  const SymmetricTridiagonal& m_;
  double abs_floor_ = 0.0;
};

SymmetricTridiagonal::SymmetricTridiagonal(std::vector<double> diagonal,
                                           std::vector<double> off_diagonal)
    : diagonal_(std::move(diagonal)), off_(std::move(off_diagonal)) {
  if (diagonal_.empty()) throw ArgumentError("tridiagonal: empty matrix");
  if (off_.size() + 1 != diagonal_.size()) {
    throw ArgumentError("tridiagonal: off-diagonal must have n - 1 entries");
  }
  off_sq_.resize(off_.size());
  double max_sq = 0.0;
  for (std::size_t i = 0; i < off_.size(); ++i) {
    off_sq_[i] = off_[i] * off_[i];
    max_sq = std::max(max_sq, off_sq_[i]);
  }
  // Same safeguard as LAPACK's PIVMIN.
  pivot_min_ = std::numeric_limits<double>::min() * std::max(1.0, max_sq);
}

std::size_t SymmetricTridiagonal::count_below(double x) const {
  std::size_t negatives = 0;
  double q = diagonal_[0] - x;
  if (std::abs(q) < pivot_min_) q = -pivot_min_;
  if (q < 0.0) ++negatives;
  for (std::size_t i = 1; i < diagonal_.size(); ++i) {
    q = diagonal_[i] - x - off_sq_[i - 1] / q;
    if (std::abs(q) < pivot_min_) q = -pivot_min_;
    if (q < 0.0) ++negatives;
  }
  return negatives;
}

std::pair<double, double> SymmetricTridiagonal::gershgorin_bounds() const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  const std::size_t n = diagonal_.size();
  for (std::size_t i = 0; i < n; ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::abs(off_[i - 1]);
    if (i + 1 < n) radius += std::abs(off_[i]);
    lo = std::min(lo, diagonal_[i] - radius);
    hi = std::max(hi, diagonal_[i] + radius);
  }
  return {lo, hi};
}

std::vector<double> lowest_eigenvalues(const SymmetricTridiagonal& matrix,
                                       std::size_t count) {
  if (count > matrix.size()) {
    throw ArgumentError("lowest_eigenvalues: requested " + std::to_string(count) +
                        " eigenvalues of a " + std::to_string(matrix.size()) +
                        "x" + std::to_string(matrix.size()) + " matrix");
  }
  if (count == 0) return {};
  return TridiagonalEigensolver(matrix).lowest(count);
}

}  // namespace qcstat
