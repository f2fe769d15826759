#include "fgt/group.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace fgt {

namespace {

cplx base_point(Model m) {
    return m == Model::halfplane ? cplx(0.0, 1.0) : cplx(0.0, 0.0);
}

double disk_height(const MoebiusMap& g, Model model) {
    cplx img = fgt::apply(g, base_point(model));
    if (model == Model::halfplane) img = cayley(img);
    return 1.0 - std::abs(img);
}

bool word_less(const Word& u, const Word& v) {
    if (u.size() != v.size()) return u.size() < v.size();
    return std::lexicographical_compare(u.begin(), u.end(), v.begin(), v.end());
}

}  // namespace

std::string word_label(const Word& w, const std::vector<std::string>& labels) {
    if (w.empty()) return "id";
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) out += ".";
        int k = w[i];
        std::size_t idx = static_cast<std::size_t>(std::abs(k)) - 1;
        out += idx < labels.size() ? labels[idx] : "g" + std::to_string(std::abs(k));
        if (k < 0) out += "^-1";
    }
    return out;
}

void validate(const GeneratorSet& gens) {
    for (std::size_t i = 0; i < gens.generators.size(); ++i) {
        const MoebiusMap& g = gens.generators[i];
        if (g.orientation != Orientation::conformal)
            throw error("generator " + std::to_string(i) + " is anticonformal");
        if (std::abs(normalized(g).det() - 1.0) > 1e-10)
            throw error("generator " + std::to_string(i) + " is not normalizable to det 1");
        if (g.is_identity()) throw error("generator " + std::to_string(i) + " is the identity");
        for (std::size_t j = 0; j < i; ++j)
            if (matrix_distance(g, gens.generators[j]) < 1e-9)
                throw error("generators " + std::to_string(j) + " and " + std::to_string(i) +
                            " coincide");
    }
}

const OrbitEntry& OrbitTable::identity_entry() const {
    for (const OrbitEntry& e : entries)
        if (e.word_length == 0) return e;
    throw error("orbit table has no identity entry");
}

std::optional<std::size_t> OrbitTable::find(const MoebiusMap& m) const {
    MoebiusMap n = normalized(m);
    double key = std::abs(n.a);
    auto lo = std::lower_bound(index_.begin(), index_.end(),
                               std::make_pair(key - 2.0 * dedup_tolerance, std::size_t{0}));
    for (auto it = lo; it != index_.end() && it->first <= key + 2.0 * dedup_tolerance; ++it) {
        if (matrix_distance(entries[it->second].map, n) < dedup_tolerance) return it->second;
    }
    return std::nullopt;
}

OrbitTable enumerate_group(const GeneratorSet& gens, int max_word_length, double height_cutoff,
                           std::size_t entry_budget) {
    if (max_word_length < 0) throw error("enumerate_group: max_word_length must be >= 0");
    validate(gens);
    if (gens.model == Model::plane) throw error("enumerate_group: disk or halfplane model only");

    OrbitTable table;
    table.gens = gens;
    table.model = gens.model;
    table.max_word_length = max_word_length;
    table.height_cutoff = height_cutoff;
    table.entry_budget = entry_budget;

    const int n = static_cast<int>(gens.generators.size());
    std::vector<MoebiusMap> letters;  // order: +1, -1, +2, -2, ...
    std::vector<int> letter_ids;
    for (int i = 0; i < n; ++i) {
        letters.push_back(normalized(gens.generators[i]));
        letter_ids.push_back(i + 1);
        letters.push_back(inverse(gens.generators[i]));
        letter_ids.push_back(-(i + 1));
    }

    struct Node {
        Word word;
        MoebiusMap map;
    };
    std::vector<Node> all;  // every reduced word seen, in deterministic order
    all.push_back({{}, identity_map(gens.model)});

    // dedup index over `all`, keyed by |a| of the normalized matrix
    std::multimap<double, std::size_t> seen;
    seen.emplace(1.0, 0);
    auto known = [&](const MoebiusMap& m) {
        double key = std::abs(m.a);
        auto lo = seen.lower_bound(key - 2e-9);
        auto hi = seen.upper_bound(key + 2e-9);
        for (auto it = lo; it != hi; ++it)
            if (matrix_distance(all[it->second].map, m) < 1e-9) return true;
        return false;
    };

    std::size_t level_begin = 0, level_end = all.size();
    for (int len = 1; len <= max_word_length && !table.budget_exceeded; ++len) {
        for (std::size_t p = level_begin; p < level_end; ++p) {
            for (std::size_t li = 0; li < letters.size(); ++li) {
                int id = letter_ids[li];
                if (!all[p].word.empty() && all[p].word.back() == -id) continue;  // reduced words
                MoebiusMap m = compose(all[p].map, letters[li]);
                if (known(m)) continue;
                Word w = all[p].word;
                w.push_back(id);
                seen.emplace(std::abs(m.a), all.size());
                all.push_back({std::move(w), m});
                if (all.size() >= entry_budget) {
                    table.budget_exceeded = true;
                    break;
                }
            }
            if (table.budget_exceeded) break;
        }
        level_begin = level_end;
        level_end = all.size();
    }

    for (const Node& node : all) {
        OrbitEntry e;
        e.word = node.word;
        e.map = node.map;
        e.base_image = fgt::apply(node.map, base_point(gens.model));
        e.height = disk_height(node.map, gens.model);
        e.word_length = static_cast<int>(node.word.size());
        if (e.word_length > 0 && e.height <= height_cutoff) continue;
        table.entries.push_back(std::move(e));
    }

    std::sort(table.entries.begin(), table.entries.end(),
              [](const OrbitEntry& x, const OrbitEntry& y) {
                  if (x.height != y.height) return x.height > y.height;
                  return word_less(x.word, y.word);
              });
    table.index_.reserve(table.entries.size());
    for (std::size_t i = 0; i < table.entries.size(); ++i)
        table.index_.emplace_back(std::abs(table.entries[i].map.a), i);
    std::sort(table.index_.begin(), table.index_.end());
    return table;
}

OrbitTable cayley_conjugate(const OrbitTable& src) {
    if (src.model != Model::halfplane)
        throw model_mismatch_error("cayley_conjugate: halfplane table expected");
    OrbitTable out = src;
    out.model = Model::disk;
    out.gens.model = Model::disk;
    out.index_.clear();
    for (MoebiusMap& g : out.gens.generators) g = cayley_conjugate(g);
    for (OrbitEntry& e : out.entries) {
        e.map = cayley_conjugate(e.map);
        e.base_image = fgt::apply(e.map, cplx(0.0, 0.0));
        // heights are already disk heights; recompute to shed roundoff
        e.height = 1.0 - std::abs(e.base_image);
        if (e.word_length == 0) e.height = 1.0;
    }
    out.index_.reserve(out.entries.size());
    for (std::size_t i = 0; i < out.entries.size(); ++i)
        out.index_.emplace_back(std::abs(out.entries[i].map.a), i);
    std::sort(out.index_.begin(), out.index_.end());
    return out;
}

MoebiusMap evaluate_word(const GeneratorSet& gens, const Word& w) {
    MoebiusMap m = identity_map(gens.model);
    for (int k : w) {
        std::size_t idx = static_cast<std::size_t>(std::abs(k)) - 1;
        if (idx >= gens.generators.size()) throw error("word references missing generator");
        MoebiusMap g = gens.generators[idx];
        if (k < 0) g = inverse(g);
        m = compose(m, g);
    }
    return m;
}

PoincareSums poincare_partial_sums(const OrbitTable& table, double exponent) {
    int max_len = 0;
    for (const OrbitEntry& e : table.entries) max_len = std::max(max_len, e.word_length);
    std::vector<double> by_len_h(max_len + 1, 0.0), by_len_e(max_len + 1, 0.0);
    for (const OrbitEntry& e : table.entries) {
        cplx img = e.base_image;
        if (table.model == Model::halfplane) img = cayley(img);
        double h = std::max(e.height, 0.0);
        double rho = std::atanh(std::min(std::abs(img), 1.0 - 1e-300));
        by_len_h[e.word_length] += std::pow(h, exponent);
        by_len_e[e.word_length] += std::exp(-2.0 * exponent * rho);
    }
    PoincareSums sums;
    double ch = 0.0, ce = 0.0;
    for (int l = 0; l <= max_len; ++l) {
        ch += by_len_h[l];
        ce += by_len_e[l];
        sums.height_sums.push_back(ch);
        sums.exp_sums.push_back(ce);
    }
    return sums;
}

DyadicDisk rubel_ryff_disk(int n) {
    if (n < 1) throw error("rubel_ryff_disk: n >= 1");
    if (n == 1) return {1.0, 1.0};
    double r = std::ldexp(1.0, n - 2);  // 2^{n-2}
    return {3.0 * r, r};
}

GeneratorSet rubel_ryff_generators(int n_max) {
    if (n_max < 1) throw error("rubel_ryff_generators: n_max >= 1");
    GeneratorSet gens;
    gens.model = Model::halfplane;
    const MoebiusMap tau = reflection_in_imaginary_axis();
    for (int n = 1; n <= n_max; ++n) {
        DyadicDisk dd = rubel_ryff_disk(n);
        MoebiusMap g = compose(tau, reflection_in_circle(dd.center, dd.radius));
        // entries are real up to roundoff; snap so halfplane invariance is exact
        g.a = cplx(g.a.real(), 0.0);
        g.b = cplx(g.b.real(), 0.0);
        g.c = cplx(g.c.real(), 0.0);
        g.d = cplx(g.d.real(), 0.0);
        g = normalized(g);
        g.model = Model::halfplane;
        gens.generators.push_back(g);
        gens.labels.push_back("g" + std::to_string(n));
    }
    return gens;
}

GeneratorSet schottky_pair_generators(
    const std::vector<std::pair<SchottkyCircle, SchottkyCircle>>& pairs) {
    GeneratorSet gens;
    gens.model = Model::halfplane;
    std::vector<SchottkyCircle> all;
    for (const auto& [c1, c2] : pairs) {
        all.push_back(c1);
        all.push_back(c2);
    }
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (!(all[i].radius > 0.0)) throw error("schottky circle radius must be positive");
        for (std::size_t j = 0; j < i; ++j) {
            double gap = std::abs(all[i].center - all[j].center);
            if (gap <= all[i].radius + all[j].radius + 1e-12)
                throw error("schottky circles overlap or are nested");
        }
    }
    int idx = 1;
    for (const auto& [c1, c2] : pairs) {
        // A2 * s * A1^{-1} with A(z) = center + radius z and s(z) = -1/z:
        // maps the exterior of circle 1 onto the interior of circle 2.
        MoebiusMap g;
        g.a = c2.center;
        g.b = -(c1.radius * c2.radius) - c1.center * c2.center;
        g.c = 1.0;
        g.d = -c1.center;
        g.orientation = Orientation::conformal;
        g.model = Model::halfplane;
        g = normalized(g);
        g.model = Model::halfplane;
        gens.generators.push_back(g);
        gens.labels.push_back("s" + std::to_string(idx++));
    }
    return gens;
}

GeneratorSet cyclic_dilation_generator(double factor) {
    if (!(factor > 0.0) || factor == 1.0)
        throw error("cyclic_dilation_generator: factor must be positive and != 1");
    GeneratorSet gens;
    gens.model = Model::halfplane;
    MoebiusMap g;
    double s = std::sqrt(factor);
    g.a = s;
    g.b = 0.0;
    g.c = 0.0;
    g.d = 1.0 / s;
    g.orientation = Orientation::conformal;
    g.model = Model::halfplane;
    gens.generators.push_back(normalized(g));
    gens.generators.back().model = Model::halfplane;
    gens.labels.push_back("h");
    return gens;
}

std::vector<cplx> limit_set_sample(const OrbitTable& table, const std::vector<cplx>& seeds,
                                   double resolution) {
    std::vector<cplx> pts;
    for (const OrbitEntry& e : table.entries) {
        for (cplx s : seeds) {
            try {
                pts.push_back(fgt::apply(e.map, s));
            } catch (const pole_error&) {
                // seed at the pole maps to infinity; skip
            }
        }
    }
    std::sort(pts.begin(), pts.end(), [](cplx u, cplx v) {
        if (u.real() != v.real()) return u.real() < v.real();
        return u.imag() < v.imag();
    });
    std::vector<cplx> out;
    for (cplx p : pts) {
        if (!out.empty() && std::abs(p - out.back()) < resolution) continue;
        out.push_back(p);
    }
    return out;
}

}  // namespace fgt
