#include "fgt/denjoy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fgt {

namespace {
constexpr double kMergeTol = 1e-12;
}

IntervalUnion::IntervalUnion(std::vector<std::pair<double, double>> intervals) {
    for (auto& [a, b] : intervals)
        if (b < a) std::swap(a, b);
    std::sort(intervals.begin(), intervals.end());
    for (const auto& [a, b] : intervals) {
        if (!iv_.empty() && a <= iv_.back().second + kMergeTol) {
            iv_.back().second = std::max(iv_.back().second, b);
        } else {
            iv_.emplace_back(a, b);
        }
    }
    prefix_.resize(iv_.size() + 1, 0.0);
    for (std::size_t k = 0; k < iv_.size(); ++k)
        prefix_[k + 1] = prefix_[k] + (iv_[k].second - iv_[k].first);
}

double IntervalUnion::total_length() const { return prefix_.empty() ? 0.0 : prefix_.back(); }

double IntervalUnion::diameter() const {
    return iv_.empty() ? 0.0 : iv_.back().second - iv_.front().first;
}

double IntervalUnion::min() const {
    if (iv_.empty()) throw error("empty interval union");
    return iv_.front().first;
}

double IntervalUnion::max() const {
    if (iv_.empty()) throw error("empty interval union");
    return iv_.back().second;
}

bool IntervalUnion::contains(double x) const {
    auto it = std::upper_bound(iv_.begin(), iv_.end(), x,
                               [](double v, const std::pair<double, double>& p) {
                                   return v < p.first;
                               });
    if (it == iv_.begin()) return false;
    --it;
    return x <= it->second;
}

double IntervalUnion::intersection_length(double a, double b) const {
    return intersection_length_centered(0.5 * (a + b), 0.5 * (b - a));
}

double IntervalUnion::intersection_length_centered(double x, double t) const {
    if (iv_.empty() || !(t > 0.0)) return 0.0;
    double a = x - t, b = x + t;
    // first interval ending after a, last interval starting before b
    auto first = std::upper_bound(iv_.begin(), iv_.end(), a,
                                  [](double v, const std::pair<double, double>& p) {
                                      return v < p.second;
                                  });
    auto last = std::lower_bound(iv_.begin(), iv_.end(), b,
                                 [](const std::pair<double, double>& p, double v) {
                                     return p.first < v;
                                 });
    if (first >= last) return 0.0;
    std::size_t i0 = static_cast<std::size_t>(first - iv_.begin());
    std::size_t i1 = static_cast<std::size_t>(last - iv_.begin()) - 1;
    // end overlaps in coordinates shifted by x, so that window bounds +-t are
    // exact when x sits on an interval endpoint
    auto overlap = [&](std::size_t k) {
        double lo = std::max(-t, iv_[k].first - x);
        double hi = std::min(t, iv_[k].second - x);
        return std::max(0.0, hi - lo);
    };
    if (i0 == i1) return overlap(i0);
    return overlap(i0) + overlap(i1) + (prefix_[i1] - prefix_[i0 + 1]);
}

IntervalUnion IntervalUnion::scaled(double a, double b) const {
    if (!(a > 0.0)) throw error("scaled: factor must be positive");
    std::vector<std::pair<double, double>> out;
    out.reserve(iv_.size());
    for (const auto& [lo, hi] : iv_) out.emplace_back(a * lo + b, a * hi + b);
    return IntervalUnion(std::move(out));
}

std::vector<double> default_t_grid(double diameter) {
    std::vector<double> grid;
    if (!(diameter > 0.0)) return grid;
    const int per_decade = 64;
    const int decades = 6;
    for (int j = 0; j <= per_decade * decades; ++j)
        grid.push_back(diameter * std::pow(10.0, -static_cast<double>(j) / per_decade));
    return grid;
}

double homogeneity_constant(const IntervalUnion& E, const std::vector<double>& t_grid,
                            int x_grid) {
    if (E.empty()) throw error("homogeneity_constant: empty set");
    double diam = E.diameter();
    if (diam <= 0.0) return 0.0;  // a single point has measure zero

    std::vector<double> ts = t_grid.empty() ? default_t_grid(diam) : t_grid;

    std::vector<double> xs;
    for (const auto& [a, b] : E.intervals()) {
        xs.push_back(a);
        xs.push_back(b);
    }
    double lo = E.min(), hi = E.max();
    for (int k = 0; k <= x_grid; ++k) {
        double x = lo + (hi - lo) * k / x_grid;
        if (E.contains(x)) xs.push_back(x);
    }

    double best = std::numeric_limits<double>::infinity();
    for (double x : xs)
        for (double t : ts) {
            if (!(t > 0.0) || t > diam) continue;
            double ratio = E.intersection_length_centered(x, t) / t;
            best = std::min(best, ratio);
        }
    return std::isfinite(best) ? best : 0.0;
}

IntervalUnion cantor_set(int levels, double removed_fraction) {
    if (levels < 0) throw error("cantor_set: levels must be >= 0");
    if (!(removed_fraction >= 0.0) || removed_fraction >= 1.0)
        throw error("cantor_set: removed_fraction must be in [0, 1)");
    std::vector<std::pair<double, double>> iv{{0.0, 1.0}};
    for (int l = 0; l < levels; ++l) {
        std::vector<std::pair<double, double>> next;
        next.reserve(iv.size() * 2);
        for (const auto& [a, b] : iv) {
            double w = (b - a) * (1.0 - removed_fraction) / 2.0;
            next.emplace_back(a, a + w);
            next.emplace_back(b - w, b);
        }
        iv = std::move(next);
    }
    return IntervalUnion(std::move(iv));
}

HomogeneityScales limit_set_homogeneity(const std::vector<double>& points, double epsilon) {
    if (points.empty()) throw error("limit_set_homogeneity: no points");
    if (!(epsilon > 0.0)) throw error("limit_set_homogeneity: epsilon must be positive");
    HomogeneityScales out;
    for (double eps : {epsilon, epsilon / 4.0, epsilon / 16.0}) {
        std::vector<std::pair<double, double>> iv;
        iv.reserve(points.size());
        for (double p : points) iv.emplace_back(p - eps / 2.0, p + eps / 2.0);
        double v = homogeneity_constant(IntervalUnion(std::move(iv)));
        out.scales.emplace_back(eps, v);
    }
    out.value = out.scales.front().second;
    return out;
}

}  // namespace fgt
