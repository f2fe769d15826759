#pragma once

#include <atomic>
#include <memory>
#include <optional>
#include <vector>

#include "fgt/fundomain.hpp"
#include "fgt/group.hpp"

namespace fgt {

struct Disk {
    cplx center{0.0};
    double radius = 0.0;
    bool contains(cplx z) const { return std::abs(z - center) <= radius; }
};

// Structural description of |mu|^2 for fields whose modulus depends only on
// slice geometry: enables exact slice-measure integration.
struct SliceProfile {
    enum class Kind { zero, constant, constant_on_disks, radial_power };
    Kind kind = Kind::zero;
    double value_sq = 0.0;       // |c|^2
    std::vector<Disk> disks;     // for constant_on_disks
    double two_alpha = 0.0;      // |mu|^2 = value_sq * (1-|z|^2)^{two_alpha}
};

// Beltrami coefficient: a measurable field with sup norm < 1, evaluable
// pointwise.  Fields are immutable and safe to evaluate concurrently.
class BeltramiField {
public:
    virtual ~BeltramiField() = default;
    virtual cplx evaluate(cplx z) const = 0;
    virtual Model model() const = 0;
    virtual double sup_norm() const = 0;
    // disks covering the support, when the support is compactly described
    virtual std::vector<Disk> support_disks() const { return {}; }
    // the field vanishes wherever the distance to the model boundary is
    // below this value (used to cut off boundary refinement exactly)
    virtual std::optional<double> boundary_clearance() const { return std::nullopt; }
    // set when |mu|^2 has one of the simple structures above
    virtual std::optional<SliceProfile> slice_profile() const { return std::nullopt; }
};

using FieldPtr = std::shared_ptr<const BeltramiField>;

FieldPtr zero_field(Model m);

// constant value on all of the model
FieldPtr constant_field(Model m, cplx value);

// value on a union of disks, zero elsewhere
FieldPtr constant_on_disks(Model m, cplx value, std::vector<Disk> disks);

// disk model: z -> value * (1 - |z|^2)^alpha
FieldPtr power_decay_field(cplx value, double alpha);

// base samples on a grid, nearest-neighbor evaluation within max_cell_radius
FieldPtr grid_field(Model m, std::vector<std::pair<cplx, cplx>> samples, double cell_radius);

// |mu(z) - mu(g(z)) conj(g'(z)) / g'(z)|: zero for group-compatible fields
double compatibility_residual(const BeltramiField& field, const MoebiusMap& g, cplx z);

// The extension of a field given on the fundamental domain to the whole
// model, transported tile by tile so that the compatibility law holds for
// every enumerated element: mu(z) = mu_F(y(z)) conj(d)/d where y = located
// inverse word and d its derivative at z.  Points whose locating element
// sits on the truncation frontier evaluate to zero and bump a counter.
class InvariantExtensionField : public BeltramiField {
public:
    InvariantExtensionField(FieldPtr base, std::shared_ptr<const OrbitTable> table,
                            bool literal_sum = false);

    cplx evaluate(cplx z) const override;
    Model model() const override { return table_->model; }
    double sup_norm() const override { return base_->sup_norm(); }
    std::vector<Disk> support_disks() const override { return base_->support_disks(); }
    std::optional<double> boundary_clearance() const override;

    const BeltramiField& base() const { return *base_; }
    const OrbitTable& table() const { return *table_; }
    const FundamentalDomainView& domain() const { return fd_; }
    std::uint64_t truncation_events() const { return truncation_events_.load(); }

    // fast pullback of z into the fundamental domain by greedy generator
    // descent; falls back to the full table scan when the descent stalls
    // outside the domain.  Returns the entry index of the locating g (the
    // tile is g^{-1}(F)).
    LocateResult locate(cplx z) const;

private:
    FieldPtr base_;
    std::shared_ptr<const OrbitTable> table_;
    FundamentalDomainView fd_;
    bool literal_sum_;
    std::vector<MoebiusMap> letters_;
    mutable std::atomic<std::uint64_t> truncation_events_{0};
};

std::shared_ptr<const InvariantExtensionField> invariant_extension(
    FieldPtr base_on_domain, std::shared_ptr<const OrbitTable> table, bool literal_sum = false);

// halfplane field drawn to the disk through the Cayley transform, with the
// same derivative cocycle: mu0(z) = mu(k^{-1} z) conj((k^{-1})') / (k^{-1})'
FieldPtr cayley_pullback(FieldPtr halfplane_field);

}  // namespace fgt
