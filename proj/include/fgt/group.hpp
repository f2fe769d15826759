#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fgt/moebius.hpp"

namespace fgt {

// A word is a sequence of signed 1-based generator indices: +k means
// generators[k-1], -k its inverse.
using Word = std::vector<int>;

std::string word_label(const Word& w, const std::vector<std::string>& labels);

struct GeneratorSet {
    std::vector<MoebiusMap> generators;  // conformal, det 1
    std::vector<std::string> labels;
    Model model = Model::disk;
};

// throws if a generator is the identity or two generators coincide
void validate(const GeneratorSet& gens);

struct OrbitEntry {
    Word word;
    MoebiusMap map;
    cplx base_image{0.0};   // image of the base point (0 in the disk, i in H)
    double height = 1.0;    // 1 - |g(0)| after transport to the disk
    int word_length = 0;
};

struct OrbitTable {
    GeneratorSet gens;
    Model model = Model::disk;
    // sorted by descending height (identity first), ties broken by word
    std::vector<OrbitEntry> entries;
    double dedup_tolerance = 1e-9;
    int max_word_length = 0;
    double height_cutoff = 0.0;
    std::size_t entry_budget = 0;
    bool budget_exceeded = false;

    const OrbitEntry& identity_entry() const;
    std::optional<std::size_t> find(const MoebiusMap& m) const;

private:
    friend OrbitTable enumerate_group(const GeneratorSet&, int, double, std::size_t);
    friend OrbitTable cayley_conjugate(const OrbitTable&);
    // |a|-sorted index over normalized matrices, for tolerance lookups
    std::vector<std::pair<double, std::size_t>> index_;
};

// Breadth-first expansion of all reduced words up to max_word_length,
// deduplicated at the matrix level (tolerance 1e-9).  Entries whose height
// does not exceed height_cutoff are omitted from the table but still
// expanded.  When the budget is hit expansion stops and the partial table is
// returned with budget_exceeded set.
OrbitTable enumerate_group(const GeneratorSet& gens, int max_word_length,
                           double height_cutoff = 0.0, std::size_t entry_budget = 500000);

OrbitTable cayley_conjugate(const OrbitTable& halfplane_table);

// evaluate a word against the generator set
MoebiusMap evaluate_word(const GeneratorSet& gens, const Word& w);

struct PoincareSums {
    std::vector<double> height_sums;  // cumulative sum of height^s by word length
    std::vector<double> exp_sums;     // same with exp(-2 s rho(0, g(0)))
};

// Partial sums of the orbital series, cumulative over word length.  The
// exponential variant uses exp(-2 rho) which is comparable to 1 - |g(0)|
// under the metric convention of this library.
PoincareSums poincare_partial_sums(const OrbitTable& table, double exponent = 1.0);

// Generators tau o sigma_n for the dyadic disk chain: disk 1 has diameter
// [0,2]; disk n >= 2 has diameter [2^{n-1}, 2^n].  Halfplane model, real
// entries, det 1.
GeneratorSet rubel_ryff_generators(int n_max);

// centers and radii of the dyadic disks (1-based n)
struct DyadicDisk {
    double center;
    double radius;
};
DyadicDisk rubel_ryff_disk(int n);

struct SchottkyCircle {
    double center;
    double radius;
};

// one hyperbolic generator per pair, mapping the exterior of the first
// circle onto the interior of the second; circles must have disjoint closures
GeneratorSet schottky_pair_generators(
    const std::vector<std::pair<SchottkyCircle, SchottkyCircle>>& pairs);

// convenience: the cyclic group of z -> factor*z on the halfplane
GeneratorSet cyclic_dilation_generator(double factor);

// Images of boundary seed points under every table element, deduplicated at
// the given resolution.  Seeds and images are boundary points of the table's
// model; images falling on a pole are skipped.
std::vector<cplx> limit_set_sample(const OrbitTable& table, const std::vector<cplx>& seeds,
                                   double resolution = 1e-9);

}  // namespace fgt
