#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include <json.hpp>

#include "fgt/beltrami.hpp"
#include "fgt/group.hpp"

namespace fgt {

using json = nlohmann::ordered_json;

class config_error : public error {
public:
    using error::error;
};

// Parsed run configuration; see README for the schema.  Unknown keys are
// rejected so typos fail fast.
struct RunConfig {
    std::uint64_t seed = 0;
    int workers = 1;
    int max_word_length = 4;
    double height_cutoff = 0.0;
    std::size_t max_entries = 500000;
    double quad_tol = 1e-6;
    double resolution = 1e-6;
    json group_spec;   // may be null
    json field_spec;   // may be null
    json queries;      // may be null
    json denjoy_spec;  // may be null
    std::string out_dir = ".";
    std::string format = "json";

    json echo;  // the normalized configuration, embedded in reports
};

RunConfig parse_config(const json& j);
RunConfig load_config_file(const std::string& path);

// instantiate the group described by the config (null spec -> trivial group)
GeneratorSet build_generators(const RunConfig& cfg);
std::shared_ptr<OrbitTable> build_table(const RunConfig& cfg);

// instantiate the field described by the config; fields of kind
// invariant_extension receive the (model-matching) table
FieldPtr build_field(const RunConfig& cfg, const json& field_spec,
                     std::shared_ptr<const OrbitTable> table);

}  // namespace fgt
