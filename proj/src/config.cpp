#include "fgt/config.hpp"

#include <fstream>
#include <set>

namespace fgt {

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw config_error(where + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw config_error(where + ": unknown key '" + it.key() + "'");
}

cplx parse_complex(const json& j, const std::string& where) {
    if (j.is_number()) return cplx(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return cplx(j[0].get<double>(), j[1].get<double>());
    throw config_error(where + ": expected a number or [re, im]");
}

Model parse_model(const json& j, const std::string& where) {
    std::string s = j.get<std::string>();
    if (s == "disk") return Model::disk;
    if (s == "halfplane") return Model::halfplane;
    throw config_error(where + ": model must be 'disk' or 'halfplane'");
}

}  // namespace

RunConfig parse_config(const json& j) {
    check_keys(j, {"seed", "workers", "depth", "tolerances", "group", "field", "queries",
                   "denjoy", "output"},
               "config");
    RunConfig cfg;
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("workers")) cfg.workers = j["workers"].get<int>();
    if (cfg.workers < 1) throw config_error("config: workers must be >= 1");
    if (j.contains("depth")) {
        const json& d = j["depth"];
        check_keys(d, {"max_word_length", "height_cutoff", "max_entries"}, "depth");
        if (d.contains("max_word_length")) cfg.max_word_length = d["max_word_length"].get<int>();
        if (d.contains("height_cutoff")) cfg.height_cutoff = d["height_cutoff"].get<double>();
        if (d.contains("max_entries")) cfg.max_entries = d["max_entries"].get<std::size_t>();
        if (cfg.max_word_length < 1) throw config_error("depth: max_word_length must be >= 1");
    }
    if (j.contains("tolerances")) {
        const json& t = j["tolerances"];
        check_keys(t, {"quadrature", "resolution"}, "tolerances");
        if (t.contains("quadrature")) cfg.quad_tol = t["quadrature"].get<double>();
        if (t.contains("resolution")) cfg.resolution = t["resolution"].get<double>();
        if (!(cfg.quad_tol > 0.0) || !(cfg.resolution > 0.0))
            throw config_error("tolerances must be positive");
    }
    if (j.contains("group")) cfg.group_spec = j["group"];
    if (j.contains("field")) cfg.field_spec = j["field"];
    if (j.contains("queries")) cfg.queries = j["queries"];
    if (j.contains("denjoy")) cfg.denjoy_spec = j["denjoy"];
    if (j.contains("output")) {
        const json& o = j["output"];
        check_keys(o, {"dir", "format"}, "output");
        if (o.contains("dir")) cfg.out_dir = o["dir"].get<std::string>();
        if (o.contains("format")) cfg.format = o["format"].get<std::string>();
        if (cfg.format != "json" && cfg.format != "text")
            throw config_error("output.format must be 'json' or 'text'");
    }

    cfg.echo = json::object();
    cfg.echo["seed"] = cfg.seed;
    cfg.echo["workers"] = cfg.workers;
    cfg.echo["depth"] = {{"max_word_length", cfg.max_word_length},
                         {"height_cutoff", cfg.height_cutoff},
                         {"max_entries", cfg.max_entries}};
    cfg.echo["tolerances"] = {{"quadrature", cfg.quad_tol}, {"resolution", cfg.resolution}};
    if (!cfg.group_spec.is_null()) cfg.echo["group"] = cfg.group_spec;
    if (!cfg.field_spec.is_null()) cfg.echo["field"] = cfg.field_spec;
    if (!cfg.queries.is_null()) cfg.echo["queries"] = cfg.queries;
    if (!cfg.denjoy_spec.is_null()) cfg.echo["denjoy"] = cfg.denjoy_spec;
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw config_error(std::string("config parse error: ") + e.what());
    }
    return parse_config(j);
}

GeneratorSet build_generators(const RunConfig& cfg) {
    const json& g = cfg.group_spec;
    if (g.is_null()) {
        GeneratorSet empty;
        empty.model = Model::disk;
        return empty;
    }
    check_keys(g, {"kind", "n_max", "factor", "pairs", "matrices", "model"}, "group");
    std::string kind = g.value("kind", "trivial");
    if (kind == "trivial") {
        GeneratorSet empty;
        empty.model = g.contains("model") ? parse_model(g["model"], "group") : Model::disk;
        return empty;
    }
    if (kind == "rubel_ryff") {
        int n_max = g.value("n_max", 4);
        return rubel_ryff_generators(n_max);
    }
    if (kind == "cyclic_dilation") {
        double factor = g.value("factor", 4.0);
        return cyclic_dilation_generator(factor);
    }
    if (kind == "schottky_pairs") {
        if (!g.contains("pairs")) throw config_error("group: schottky_pairs needs 'pairs'");
        std::vector<std::pair<SchottkyCircle, SchottkyCircle>> pairs;
        for (const json& p : g["pairs"]) {
            if (!p.is_array() || p.size() != 2)
                throw config_error("group: each pair is [[c,r],[c,r]]");
            auto read = [&](const json& c) {
                if (!c.is_array() || c.size() != 2)
                    throw config_error("group: circle is [center, radius]");
                return SchottkyCircle{c[0].get<double>(), c[1].get<double>()};
            };
            pairs.emplace_back(read(p[0]), read(p[1]));
        }
        return schottky_pair_generators(pairs);
    }
    if (kind == "matrices") {
        if (!g.contains("matrices") || !g.contains("model"))
            throw config_error("group: 'matrices' kind needs 'matrices' and 'model'");
        GeneratorSet gens;
        gens.model = parse_model(g["model"], "group");
        int idx = 1;
        for (const json& m : g["matrices"]) {
            if (!m.is_array() || m.size() != 8)
                throw config_error("group: each matrix is 8 numbers [aRe,aIm,bRe,...]");
            MoebiusMap f;
            f.a = cplx(m[0].get<double>(), m[1].get<double>());
            f.b = cplx(m[2].get<double>(), m[3].get<double>());
            f.c = cplx(m[4].get<double>(), m[5].get<double>());
            f.d = cplx(m[6].get<double>(), m[7].get<double>());
            f.orientation = Orientation::conformal;
            f = normalized(f);
            f.model = gens.model;
            gens.generators.push_back(f);
            gens.labels.push_back("g" + std::to_string(idx++));
        }
        validate(gens);
        return gens;
    }
    throw config_error("group: unknown kind '" + kind + "'");
}

std::shared_ptr<OrbitTable> build_table(const RunConfig& cfg) {
    GeneratorSet gens = build_generators(cfg);
    return std::make_shared<OrbitTable>(
        enumerate_group(gens, cfg.max_word_length, cfg.height_cutoff, cfg.max_entries));
}

FieldPtr build_field(const RunConfig& cfg, const json& spec,
                     std::shared_ptr<const OrbitTable> table) {
    if (spec.is_null()) throw config_error("field: missing specification");
    check_keys(spec,
               {"kind", "model", "value", "alpha", "disks", "base", "literal_sum", "grid_file",
                "cell_radius"},
               "field");
    std::string kind = spec.value("kind", "zero");
    Model model = spec.contains("model") ? parse_model(spec["model"], "field")
                                         : (table ? table->model : Model::disk);
    if (kind == "zero") return zero_field(model);
    if (kind == "constant")
        return constant_field(model, parse_complex(spec.at("value"), "field.value"));
    if (kind == "power_decay")
        return power_decay_field(parse_complex(spec.at("value"), "field.value"),
                                 spec.value("alpha", 0.5));
    if (kind == "constant_on_disks") {
        std::vector<Disk> disks;
        for (const json& d : spec.at("disks")) {
            if (!d.is_array() || d.size() != 3)
                throw config_error("field.disks: each disk is [x, y, radius]");
            disks.push_back(Disk{cplx(d[0].get<double>(), d[1].get<double>()), d[2].get<double>()});
        }
        return constant_on_disks(model, parse_complex(spec.at("value"), "field.value"),
                                 std::move(disks));
    }
    if (kind == "grid") {
        std::ifstream in(spec.at("grid_file").get<std::string>());
        if (!in) throw config_error("field: cannot open grid file");
        std::vector<std::pair<cplx, cplx>> samples;
        double x, y, re, im;
        while (in >> x >> y >> re >> im) samples.emplace_back(cplx(x, y), cplx(re, im));
        return grid_field(model, std::move(samples), spec.value("cell_radius", 0.05));
    }
    if (kind == "invariant_extension") {
        if (!table) throw config_error("field: invariant_extension needs a group");
        FieldPtr base = build_field(cfg, spec.at("base"), table);
        return invariant_extension(base, table, spec.value("literal_sum", false));
    }
    throw config_error("field: unknown kind '" + kind + "'");
}

}  // namespace fgt
