#include "fgt/fundomain.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

namespace fgt {

namespace {

constexpr double kTieTol = 1e-12;
constexpr double kSupportTol = 1e-9;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double t) {
    t = std::fmod(t, kTwoPi);
    return t < 0.0 ? t + kTwoPi : t;
}

struct Shadow {
    double lo, hi;
    std::size_t id;
};

}  // namespace

FundamentalDomainView::FundamentalDomainView(const OrbitTable& table)
    : table_(&table), model_(table.model) {
    if (model_ == Model::plane) throw error("fundamental domain: disk or halfplane model only");
    bisectors_.reserve(table.entries.size());
    for (std::size_t i = 0; i < table.entries.size(); ++i) {
        const OrbitEntry& e = table.entries[i];
        if (e.word_length == 0) continue;
        cplx w0 = e.base_image;
        Bisector b;
        b.entry_index = i;
        if (model_ == Model::disk) {
            double m2 = std::norm(w0);
            if (m2 < 1e-28) continue;  // orbit point at the base: no bisector
            b.center = w0 / m2;
            b.radius = std::sqrt(std::max(1.0 - m2, 0.0)) / std::sqrt(m2);
            b.keep_inside = false;
        } else {
            double u = w0.real(), v = w0.imag();
            if (std::abs(w0 - cplx(0.0, 1.0)) < 1e-14) continue;
            if (std::abs(v - 1.0) <= 1e-12 * std::max(1.0, std::abs(w0))) {
                b.is_line = true;
                b.line_x = u / 2.0;
                b.keep_left = u > 0.0;  // base x = 0 stays on the kept side
            } else {
                b.center = cplx(u / (1.0 - v), 0.0);
                b.radius = std::sqrt(v) * std::abs(w0 - cplx(0.0, 1.0)) / std::abs(v - 1.0);
                b.keep_inside = v > 1.0;
            }
        }
        bisectors_.push_back(b);
    }
    // big excluded regions first, for early exit in membership
    std::sort(bisectors_.begin(), bisectors_.end(), [](const Bisector& x, const Bisector& y) {
        double rx = x.is_line ? std::numeric_limits<double>::infinity() : x.radius;
        double ry = y.is_line ? std::numeric_limits<double>::infinity() : y.radius;
        if (rx != ry) return rx > ry;
        return x.entry_index < y.entry_index;
    });
}

cplx FundamentalDomainView::base_point() const {
    return model_ == Model::halfplane ? cplx(0.0, 1.0) : cplx(0.0, 0.0);
}

bool FundamentalDomainView::excluded_by(const Bisector& b, cplx z, double tol) const {
    if (b.is_line) {
        return b.keep_left ? z.real() > b.line_x + tol : z.real() < b.line_x - tol;
    }
    double dist = std::abs(z - b.center);
    return b.keep_inside ? dist > b.radius + tol : dist < b.radius - tol;
}

bool FundamentalDomainView::membership(cplx z) const {
    for (const Bisector& b : bisectors_)
        if (excluded_by(b, z, kTieTol)) return false;
    return true;
}

bool FundamentalDomainView::membership(const ModelPoint& z) const {
    if (z.model != model_) throw model_mismatch_error("membership: model mismatch");
    return membership(z.value);
}

std::vector<std::size_t> FundamentalDomainView::supported_side_indices() const {
    const std::size_t n = bisectors_.size();
    std::vector<bool> dominated(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        const Bisector& bi = bisectors_[i];
        if (bi.is_line || bi.keep_inside) continue;
        for (std::size_t j = 0; j < n && !dominated[i]; ++j) {
            if (j == i || dominated[j]) continue;
            const Bisector& bj = bisectors_[j];
            if (bj.is_line || bj.keep_inside) continue;
            // excluded disk of i contained in excluded disk of j
            if (std::abs(bi.center - bj.center) <= bj.radius - bi.radius + 1e-12 &&
                bi.radius < bj.radius + 1e-12)
                dominated[i] = true;
        }
    }

    constexpr int kSamples = 33;
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (dominated[i]) continue;
        const Bisector& b = bisectors_[i];
        bool supported = false;
        for (int s = 0; s < kSamples && !supported; ++s) {
            double t = (s + 0.5) / kSamples;
            cplx z;
            if (b.is_line) {
                // geodesic vertical line: geometric ladder of heights
                double y = std::pow(10.0, -3.0 + 6.0 * t);
                z = cplx(b.line_x, y);
            } else if (model_ == Model::disk) {
                double phi = std::arg(b.center);
                double delta = std::acos(std::clamp(b.radius / std::abs(b.center), -1.0, 1.0));
                double psi = phi + std::numbers::pi + (2.0 * t - 1.0) * delta;
                z = b.center + b.radius * cplx(std::cos(psi), std::sin(psi));
            } else {
                double psi = std::numbers::pi * t;
                z = b.center + b.radius * cplx(std::cos(psi), std::sin(psi));
            }
            supported = true;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                if (excluded_by(bisectors_[j], z, kSupportTol)) {
                    supported = false;
                    break;
                }
            }
        }
        if (supported) out.push_back(i);
    }
    return out;
}

std::vector<GeodesicSide> FundamentalDomainView::sides() const {
    std::vector<GeodesicSide> sides;
    for (std::size_t i : supported_side_indices()) {
        GeodesicSide s;
        s.geometry = bisectors_[i];
        s.pairing_word = table_->entries[bisectors_[i].entry_index].word;
        sides.push_back(std::move(s));
    }
    std::sort(sides.begin(), sides.end(), [this](const GeodesicSide& x, const GeodesicSide& y) {
        double px = x.geometry.is_line ? x.geometry.line_x
                    : model_ == Model::disk ? wrap_angle(std::arg(x.geometry.center))
                                            : x.geometry.center.real();
        double py = y.geometry.is_line ? y.geometry.line_x
                    : model_ == Model::disk ? wrap_angle(std::arg(y.geometry.center))
                                            : y.geometry.center.real();
        return px < py;
    });
    return sides;
}

InfinityBoundary FundamentalDomainView::infinite_boundary(double resolution) const {
    if (!(resolution > 0.0)) throw error("infinite_boundary: resolution must be positive");
    InfinityBoundary ib;
    ib.model = model_;
    ib.depth = table_->max_word_length;

    // shadows of the bisectors on the model boundary
    std::vector<Shadow> shadows;
    std::vector<std::pair<double, std::size_t>> rays;  // halfplane: (x, id), sign in keep flag
    std::vector<bool> ray_to_right;
    const double inf = std::numeric_limits<double>::infinity();

    for (std::size_t i = 0; i < bisectors_.size(); ++i) {
        const Bisector& b = bisectors_[i];
        if (model_ == Model::disk) {
            double alpha = std::acos(std::clamp(1.0 / std::abs(b.center), -1.0, 1.0));
            double phi = wrap_angle(std::arg(b.center));
            shadows.push_back({phi - alpha, phi + alpha, i});
        } else if (b.is_line) {
            rays.emplace_back(b.line_x, i);
            ray_to_right.push_back(b.keep_left);  // excluded side is to the right
        } else if (b.keep_inside) {
            rays.emplace_back(b.center.real() - b.radius, i);
            ray_to_right.push_back(false);
            rays.emplace_back(b.center.real() + b.radius, i);
            ray_to_right.push_back(true);
        } else {
            shadows.push_back({b.center.real() - b.radius, b.center.real() + b.radius, i});
        }
    }

    double window_lo = 0.0, window_hi = 0.0;
    if (model_ == Model::disk) {
        // unwrap: shift every shadow into [0, 2pi) by its lo endpoint
        for (Shadow& s : shadows) {
            double lo = wrap_angle(s.lo);
            double len = s.hi - s.lo;
            s.lo = lo;
            s.hi = lo + len;
        }
    } else {
        double lo = inf, hi = -inf;
        for (const Shadow& s : shadows) {
            lo = std::min(lo, s.lo);
            hi = std::max(hi, s.hi);
        }
        for (auto& [x, id] : rays) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        if (shadows.empty() && rays.empty()) {
            lo = -1.0;
            hi = 1.0;
        }
        double pad = std::max(1.0, 0.05 * (hi - lo));
        window_lo = lo - pad;
        window_hi = hi + pad;
        ib.unbounded_tails = true;
        for (std::size_t k = 0; k < rays.size(); ++k) {
            if (ray_to_right[k])
                shadows.push_back({rays[k].first, window_hi, rays[k].second});
            else
                shadows.push_back({window_lo, rays[k].first, rays[k].second});
        }
        ib.window_lo = window_lo;
        ib.window_hi = window_hi;
    }

    std::sort(shadows.begin(), shadows.end(), [](const Shadow& a, const Shadow& b) {
        if (a.lo != b.lo) return a.lo < b.lo;
        return a.hi > b.hi;
    });

    struct Merged {
        double lo, hi;
        std::size_t lo_id, hi_id;
    };
    struct Abutment {
        double x;
        std::size_t left_id, right_id;
    };
    std::vector<Merged> merged;
    std::vector<Abutment> abutments;
    for (const Shadow& s : shadows) {
        if (!merged.empty() && s.lo <= merged.back().hi + resolution) {
            Merged& cur = merged.back();
            double gap = s.lo - cur.hi;
            if (std::abs(gap) <= resolution && s.hi > cur.hi)
                abutments.push_back({0.5 * (s.lo + cur.hi), cur.hi_id, s.id});
            if (s.hi > cur.hi) {
                cur.hi = s.hi;
                cur.hi_id = s.id;
            }
        } else {
            merged.push_back({s.lo, s.hi, s.id, s.id});
        }
    }

    // parabolic fixed points available in the table
    struct Para {
        double coord;  // angle (disk) or x (halfplane)
        cplx position;
        std::size_t entry;
    };
    std::vector<Para> paras;
    for (std::size_t i = 0; i < table_->entries.size(); ++i) {
        const OrbitEntry& e = table_->entries[i];
        if (e.word_length == 0) continue;
        try {
            if (classify(e.map) != MapClass::parabolic) continue;
            cplx fp = parabolic_fixed_point(e.map);
            if (model_ == Model::disk)
                paras.push_back({wrap_angle(std::arg(fp)), fp / std::abs(fp), i});
            else
                paras.push_back({fp.real(), cplx(fp.real(), 0.0), i});
        } catch (const error&) {
            continue;  // fixed point at infinity or not parabolic after all
        }
    }
    auto match_parabolic = [&](double coord) -> const Para* {
        const Para* best = nullptr;
        int best_len = std::numeric_limits<int>::max();
        for (const Para& p : paras) {
            double d = std::abs(p.coord - coord);
            if (model_ == Model::disk) d = std::min(d, kTwoPi - d);
            if (d > 1e-8) continue;
            int len = table_->entries[p.entry].word_length;
            if (len < best_len) {
                best = &p;
                best_len = len;
            }
        }
        return best;
    };

    auto emit_cusp = [&](const Abutment& ab) {
        const Para* p = match_parabolic(model_ == Model::disk ? wrap_angle(ab.x) : ab.x);
        if (!p) return;
        CuspInfo c;
        c.coordinate = model_ == Model::disk ? wrap_angle(ab.x) : ab.x;
        c.position = model_ == Model::disk
                         ? cplx(std::cos(c.coordinate), std::sin(c.coordinate))
                         : cplx(c.coordinate, 0.0);
        c.parabolic_word = table_->entries[p->entry].word;
        const Bisector& ba = bisectors_[ab.left_id];
        const Bisector& bb = bisectors_[ab.right_id];
        c.radius_a = ba.is_line ? std::numeric_limits<double>::infinity() : ba.radius;
        c.radius_b = bb.is_line ? std::numeric_limits<double>::infinity() : bb.radius;
        c.side_a = ba.entry_index;
        c.side_b = bb.entry_index;
        ib.cusps.push_back(std::move(c));
    };

    if (merged.empty()) {
        if (model_ == Model::disk) {
            ib.free_arcs.push_back({0.0, kTwoPi});
            ib.free_measure = kTwoPi;
        } else {
            ib.free_arcs.push_back({window_lo, window_hi});
            ib.free_measure = window_hi - window_lo;
        }
        return ib;
    }

    for (const Abutment& ab : abutments) emit_cusp(ab);

    // complement of the merged union: free arcs and cross-gap cusps
    for (std::size_t k = 0; k + 1 < merged.size(); ++k) {
        double gap = merged[k + 1].lo - merged[k].hi;
        if (gap > resolution)
            ib.free_arcs.push_back({merged[k].hi, merged[k + 1].lo});
        else if (gap > -resolution)
            emit_cusp({0.5 * (merged[k].hi + merged[k + 1].lo), merged[k].hi_id,
                       merged[k + 1].lo_id});
    }
    if (model_ == Model::disk) {
        double gap = merged.front().lo + kTwoPi - merged.back().hi;
        if (gap > resolution)
            ib.free_arcs.push_back({merged.back().hi, merged.front().lo + kTwoPi});
        else if (gap > -resolution)
            emit_cusp({0.5 * (merged.back().hi + merged.front().lo + kTwoPi),
                       merged.back().hi_id, merged.front().lo_id});
    } else {
        if (merged.front().lo - window_lo > resolution)
            ib.free_arcs.push_back({window_lo, merged.front().lo});
        if (window_hi - merged.back().hi > resolution)
            ib.free_arcs.push_back({merged.back().hi, window_hi});
    }

    // deduplicate cusps found both as overlap abutments and as small gaps
    std::sort(ib.cusps.begin(), ib.cusps.end(),
              [](const CuspInfo& a, const CuspInfo& b) { return a.coordinate < b.coordinate; });
    std::vector<CuspInfo> unique_cusps;
    for (CuspInfo& c : ib.cusps) {
        if (!unique_cusps.empty() &&
            std::abs(c.coordinate - unique_cusps.back().coordinate) <= resolution)
            continue;
        unique_cusps.push_back(std::move(c));
    }
    ib.cusps = std::move(unique_cusps);

    for (const BoundaryArc& a : ib.free_arcs) ib.free_measure += a.length();
    return ib;
}

namespace {

// refine the transition between a retained and a dropped parameter value
double bisect_corner(const std::function<bool(double)>& retained, double t_in, double t_out) {
    for (int i = 0; i < 24; ++i) {
        double mid = 0.5 * (t_in + t_out);
        if (retained(mid))
            t_in = mid;
        else
            t_out = mid;
    }
    return 0.5 * (t_in + t_out);
}

}  // namespace

std::vector<std::vector<cplx>> FundamentalDomainView::boundary_polyline(
    double relative_error) const {
    if (model_ != Model::disk)
        throw model_mismatch_error("boundary_polyline: disk model only (conjugate first)");
    // sample step targeting chord error ~ relative_error^2 per segment
    const double step = std::max(1e-3, std::sqrt(relative_error) * 0.5);
    std::vector<std::vector<cplx>> pieces;

    // geodesic sides, trimmed to the part actually on the domain boundary
    for (std::size_t i : supported_side_indices()) {
        const Bisector& b = bisectors_[i];
        double phi = std::arg(b.center);
        double delta = std::acos(std::clamp(b.radius / std::abs(b.center), -1.0, 1.0));
        auto point_at = [&](double t) {
            double psi = phi + std::numbers::pi + (2.0 * t - 1.0) * delta;
            return b.center + b.radius * cplx(std::cos(psi), std::sin(psi));
        };
        auto retained = [&](double t) {
            cplx z = point_at(t);
            for (std::size_t j = 0; j < bisectors_.size(); ++j) {
                if (j == i) continue;
                if (excluded_by(bisectors_[j], z, kSupportTol)) return false;
            }
            return true;
        };
        int n = std::max(16, static_cast<int>(std::ceil(2.0 * delta * b.radius / step)));
        std::vector<cplx> run;
        bool prev = false;
        double prev_t = 0.0;
        for (int s = 0; s <= n; ++s) {
            double t = static_cast<double>(s) / n;
            bool r = retained(t);
            if (r && !prev && s > 0) run.push_back(point_at(bisect_corner(retained, t, prev_t)));
            if (r) run.push_back(point_at(t));
            if (!r && prev) {
                run.push_back(point_at(bisect_corner(retained, prev_t, t)));
                if (run.size() >= 2) pieces.push_back(std::move(run));
                run.clear();
            }
            prev = r;
            prev_t = t;
        }
        if (run.size() >= 2) pieces.push_back(std::move(run));
    }

    // free boundary arcs on the unit circle
    InfinityBoundary ib = infinite_boundary(1e-9);
    for (const BoundaryArc& a : ib.free_arcs) {
        int n = std::max(8, static_cast<int>(std::ceil(a.length() / step)));
        std::vector<cplx> run;
        run.reserve(n + 1);
        for (int s = 0; s <= n; ++s) {
            double t = a.lo + a.length() * s / n;
            run.push_back(cplx(std::cos(t), std::sin(t)));
        }
        pieces.push_back(std::move(run));
    }
    return pieces;
}

double FundamentalDomainView::tile_boundary_length(const MoebiusMap& map,
                                                   double relative_error) const {
    double prev = -1.0;
    for (double rel = relative_error; rel > relative_error / 64.0; rel /= 4.0) {
        auto pieces = boundary_polyline(rel);
        double len = 0.0;
        for (const auto& piece : pieces)
            for (std::size_t k = 0; k + 1 < piece.size(); ++k)
                len += std::abs(fgt::apply(map, piece[k + 1]) - fgt::apply(map, piece[k]));
        if (prev >= 0.0 && std::abs(len - prev) <= 0.25 * relative_error * std::abs(len))
            return len;
        prev = len;
    }
    return prev;
}

double FundamentalDomainView::tile_boundary_length(const Word& word,
                                                   double relative_error) const {
    return tile_boundary_length(evaluate_word(table_->gens, word), relative_error);
}

FundamentalDomainView::LengthSums FundamentalDomainView::length_sum_partials(
    int max_depth, double relative_error) const {
    auto pieces = boundary_polyline(relative_error / 4.0);
    int depth = 0;
    for (const OrbitEntry& e : table_->entries)
        depth = std::max(depth, std::min(e.word_length, max_depth));
    LengthSums out;
    out.level_increments.assign(depth + 1, 0.0);
    for (const OrbitEntry& e : table_->entries) {
        if (e.word_length > depth) continue;
        double len = 0.0;
        for (const auto& piece : pieces)
            for (std::size_t k = 0; k + 1 < piece.size(); ++k)
                len += std::abs(fgt::apply(e.map, piece[k + 1]) - fgt::apply(e.map, piece[k]));
        out.level_increments[e.word_length] += len;
    }
    double cum = 0.0;
    for (double inc : out.level_increments) {
        cum += inc;
        out.partial_sums.push_back(cum);
    }
    return out;
}

LocateResult locate_tile(const OrbitTable& table, cplx z) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_idx = 0;
    for (std::size_t i = 0; i < table.entries.size(); ++i) {
        const OrbitEntry& e = table.entries[i];
        double q;
        try {
            cplx w = fgt::apply(e.map, z);
            if (table.model == Model::disk) {
                q = std::abs(w);
            } else {
                if (w.imag() <= 0.0) continue;
                q = std::norm(w - cplx(0.0, 1.0)) / w.imag();
            }
        } catch (const pole_error&) {
            continue;
        }
        if (q < best - 1e-15) {
            best = q;
            best_idx = i;
        }
    }
    LocateResult r;
    r.entry_index = best_idx;
    r.frontier = table.max_word_length > 0 &&
                 table.entries[best_idx].word_length == table.max_word_length;
    return r;
}

}  // namespace fgt
