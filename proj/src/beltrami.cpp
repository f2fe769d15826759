#include "fgt/beltrami.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fgt {

namespace {

class ZeroField : public BeltramiField {
public:
    explicit ZeroField(Model m) : model_(m) {}
    cplx evaluate(cplx) const override { return 0.0; }
    Model model() const override { return model_; }
    double sup_norm() const override { return 0.0; }
    std::vector<Disk> support_disks() const override { return {}; }
    std::optional<double> boundary_clearance() const override { return 1.0; }
    std::optional<SliceProfile> slice_profile() const override {
        return SliceProfile{SliceProfile::Kind::zero, 0.0, {}, 0.0};
    }

private:
    Model model_;
};

class ConstantField : public BeltramiField {
public:
    ConstantField(Model m, cplx v) : model_(m), value_(v) {
        if (std::abs(v) >= 1.0) throw error("beltrami field needs |value| < 1");
    }
    cplx evaluate(cplx) const override { return value_; }
    Model model() const override { return model_; }
    double sup_norm() const override { return std::abs(value_); }
    std::optional<SliceProfile> slice_profile() const override {
        return SliceProfile{SliceProfile::Kind::constant, std::norm(value_), {}, 0.0};
    }

private:
    Model model_;
    cplx value_;
};

class ConstantOnDisks : public BeltramiField {
public:
    ConstantOnDisks(Model m, cplx v, std::vector<Disk> disks)
        : model_(m), value_(v), disks_(std::move(disks)) {
        if (std::abs(v) >= 1.0) throw error("beltrami field needs |value| < 1");
    }
    cplx evaluate(cplx z) const override {
        for (const Disk& d : disks_)
            if (d.contains(z)) return value_;
        return 0.0;
    }
    Model model() const override { return model_; }
    double sup_norm() const override { return std::abs(value_); }
    std::vector<Disk> support_disks() const override { return disks_; }
    std::optional<double> boundary_clearance() const override {
        // distance from the model boundary below which all disks are cleared
        double clearance = std::numeric_limits<double>::infinity();
        for (const Disk& d : disks_) {
            double edge;
            if (model_ == Model::disk)
                edge = 1.0 - (std::abs(d.center) + d.radius);
            else
                edge = d.center.imag() - d.radius;
            if (edge <= 0.0) return std::nullopt;  // support touches the boundary
            clearance = std::min(clearance, edge);
        }
        return disks_.empty() ? std::optional<double>(1.0) : std::optional<double>(clearance);
    }
    std::optional<SliceProfile> slice_profile() const override {
        return SliceProfile{SliceProfile::Kind::constant_on_disks, std::norm(value_), disks_, 0.0};
    }

private:
    Model model_;
    cplx value_;
    std::vector<Disk> disks_;
};

class PowerDecayField : public BeltramiField {
public:
    PowerDecayField(cplx v, double alpha) : value_(v), alpha_(alpha) {
        if (std::abs(v) >= 1.0) throw error("beltrami field needs |value| < 1");
        if (alpha < 0.0) throw error("power_decay: alpha must be >= 0");
    }
    cplx evaluate(cplx z) const override {
        double w = 1.0 - std::norm(z);
        if (w <= 0.0) return 0.0;
        return value_ * std::pow(w, alpha_);
    }
    Model model() const override { return Model::disk; }
    double sup_norm() const override { return std::abs(value_); }
    std::optional<SliceProfile> slice_profile() const override {
        return SliceProfile{SliceProfile::Kind::radial_power, std::norm(value_), {}, 2.0 * alpha_};
    }

private:
    cplx value_;
    double alpha_;
};

class GridField : public BeltramiField {
public:
    GridField(Model m, std::vector<std::pair<cplx, cplx>> samples, double cell_radius)
        : model_(m), samples_(std::move(samples)), cell_radius_(cell_radius) {
        for (const auto& [pos, val] : samples_)
            sup_ = std::max(sup_, std::abs(val));
        if (sup_ >= 1.0) throw error("grid field needs sup |value| < 1");
    }
    cplx evaluate(cplx z) const override {
        double best = cell_radius_;
        cplx value = 0.0;
        for (const auto& [pos, val] : samples_) {
            double d = std::abs(z - pos);
            if (d < best) {
                best = d;
                value = val;
            }
        }
        return value;
    }
    Model model() const override { return model_; }
    double sup_norm() const override { return sup_; }
    std::vector<Disk> support_disks() const override {
        std::vector<Disk> out;
        out.reserve(samples_.size());
        for (const auto& [pos, val] : samples_)
            if (std::abs(val) > 0.0) out.push_back({pos, cell_radius_});
        return out;
    }

private:
    Model model_;
    std::vector<std::pair<cplx, cplx>> samples_;
    double cell_radius_;
    double sup_ = 0.0;
};

class CayleyPullbackField : public BeltramiField {
public:
    explicit CayleyPullbackField(FieldPtr inner) : inner_(std::move(inner)) {
        if (inner_->model() != Model::halfplane)
            throw model_mismatch_error("cayley_pullback expects a halfplane field");
    }
    cplx evaluate(cplx z) const override {
        cplx w;
        try {
            w = cayley_inv(z);
        } catch (const pole_error&) {
            return 0.0;  // z = 1 maps to infinity
        }
        if (w.imag() <= 0.0) return 0.0;
        // (k^{-1})'(z) = 2i / (1-z)^2
        cplx d = cplx(0.0, 2.0) / ((1.0 - z) * (1.0 - z));
        return inner_->evaluate(w) * std::conj(d) / d;
    }
    Model model() const override { return Model::disk; }
    double sup_norm() const override { return inner_->sup_norm(); }

private:
    FieldPtr inner_;
};

}  // namespace

FieldPtr zero_field(Model m) { return std::make_shared<ZeroField>(m); }

FieldPtr constant_field(Model m, cplx value) { return std::make_shared<ConstantField>(m, value); }

FieldPtr constant_on_disks(Model m, cplx value, std::vector<Disk> disks) {
    return std::make_shared<ConstantOnDisks>(m, value, std::move(disks));
}

FieldPtr power_decay_field(cplx value, double alpha) {
    return std::make_shared<PowerDecayField>(value, alpha);
}

FieldPtr grid_field(Model m, std::vector<std::pair<cplx, cplx>> samples, double cell_radius) {
    return std::make_shared<GridField>(m, std::move(samples), cell_radius);
}

double compatibility_residual(const BeltramiField& field, const MoebiusMap& g, cplx z) {
    cplx gz = fgt::apply(g, z);
    cplx d = derivative(g, z);
    return std::abs(field.evaluate(z) - field.evaluate(gz) * std::conj(d) / d);
}

InvariantExtensionField::InvariantExtensionField(FieldPtr base,
                                                 std::shared_ptr<const OrbitTable> table,
                                                 bool literal_sum)
    : base_(std::move(base)),
      table_(std::move(table)),
      fd_(*table_),
      literal_sum_(literal_sum) {
    if (base_->model() != table_->model)
        throw model_mismatch_error("invariant extension: field and table models differ");
    for (const MoebiusMap& g : table_->gens.generators) {
        letters_.push_back(normalized(g));
        letters_.back().model = g.model;
        letters_.push_back(inverse(g));
    }
}

LocateResult InvariantExtensionField::locate(cplx z) const {
    // greedy descent: pull z toward the base point one generator at a time
    auto dist_q = [this](cplx w) {
        if (table_->model == Model::disk) return std::abs(w);
        if (w.imag() <= 0.0) return std::numeric_limits<double>::infinity();
        return std::norm(w - cplx(0.0, 1.0)) / w.imag();
    };
    const int max_steps = table_->max_word_length;
    Word word;  // the locating element g as letters, built left to right
    cplx w = z;
    double q = dist_q(w);
    for (int step = 0; step < max_steps; ++step) {
        double best_q = q;
        std::size_t best_l = letters_.size();
        cplx best_w = w;
        for (std::size_t l = 0; l < letters_.size(); ++l) {
            cplx cand;
            try {
                cand = fgt::apply(letters_[l], w);
            } catch (const pole_error&) {
                continue;
            }
            double cq = dist_q(cand);
            if (cq < best_q * (1.0 - 1e-14) && cq < best_q) {
                best_q = cq;
                best_l = l;
                best_w = cand;
            }
        }
        if (best_l == letters_.size()) break;
        int gen = static_cast<int>(best_l / 2) + 1;
        int letter = (best_l % 2 == 0) ? gen : -gen;
        word.push_back(letter);
        w = best_w;
        q = best_q;
    }

    bool still_reducible = false;
    for (std::size_t l = 0; l < letters_.size() && !still_reducible; ++l) {
        try {
            if (dist_q(fgt::apply(letters_[l], w)) < q * (1.0 - 1e-12)) still_reducible = true;
        } catch (const pole_error&) {
        }
    }

    // the descent letters compose (last o ... o first) to the locating g;
    // as a word in the table that is simply the reversed letter sequence
    Word table_word(word.rbegin(), word.rend());
    if (auto idx = table_->find(evaluate_word(table_->gens, table_word))) {
        LocateResult r;
        r.entry_index = *idx;
        r.frontier = still_reducible ||
                     (table_->max_word_length > 0 &&
                      table_->entries[*idx].word_length == table_->max_word_length);
        return r;
    }
    return locate_tile(*table_, z);  // stalled outside the enumerated tiles
}

cplx InvariantExtensionField::evaluate(cplx z) const {
    LocateResult loc = locate(z);
    if (loc.frontier) {
        truncation_events_.fetch_add(1, std::memory_order_relaxed);
        return 0.0;
    }
    const OrbitEntry& e = table_->entries[loc.entry_index];
    cplx w;
    try {
        w = fgt::apply(e.map, z);
    } catch (const pole_error&) {
        return 0.0;
    }
    cplx value = base_->evaluate(w);
    if (literal_sum_ || value == cplx(0.0)) return value;
    cplx d = derivative(e.map, z);  // e.map is the inverse of the tile word
    return value * std::conj(d) / d;
}

std::optional<double> InvariantExtensionField::boundary_clearance() const {
    auto base_clearance = base_->boundary_clearance();
    auto disks = base_->support_disks();
    if (disks.empty() || !base_clearance) return std::nullopt;
    // max |w| over the base support, then push through the worst table element
    double r_max = 0.0;
    for (const Disk& d : disks) {
        if (table_->model == Model::halfplane) {
            Circle img = map_circle(cayley_as_map(), Circle{d.center, d.radius});
            r_max = std::max(r_max, std::abs(img.center) + img.radius);
        } else {
            r_max = std::max(r_max, std::abs(d.center) + d.radius);
        }
    }
    if (r_max >= 1.0) return std::nullopt;
    double h_min = 1.0;
    for (const OrbitEntry& e : table_->entries) h_min = std::min(h_min, e.height);
    double disk_clearance = 0.5 * h_min * (1.0 - r_max);
    if (table_->model == Model::disk) return disk_clearance;
    // crude but safe halfplane bound: Im w >= (1-|z|)/4 transfers smallness
    return disk_clearance / 4.0;
}

std::shared_ptr<const InvariantExtensionField> invariant_extension(
    FieldPtr base_on_domain, std::shared_ptr<const OrbitTable> table, bool literal_sum) {
    return std::make_shared<InvariantExtensionField>(std::move(base_on_domain), std::move(table),
                                                     literal_sum);
}

FieldPtr cayley_pullback(FieldPtr halfplane_field) {
    return std::make_shared<CayleyPullbackField>(std::move(halfplane_field));
}

}  // namespace fgt
