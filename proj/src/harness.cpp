#include "fgt/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "fgt/denjoy.hpp"
#include "fgt/svg.hpp"

namespace fgt {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

json make_record(const std::string& name, const std::string& quantity, const std::string& status,
                 json values, int depth) {
    json r = json::object();
    r["name"] = name;
    r["quantity"] = quantity;
    r["status"] = status;
    r["depth"] = depth;
    r["values"] = std::move(values);
    return r;
}

json report_skeleton(const std::string& command, const RunConfig& cfg) {
    json rep = json::object();
    rep["schema_version"] = 1;
    rep["command"] = command;
    rep["config"] = cfg.echo;
    rep["records"] = json::array();
    return rep;
}

int combine_exit(const json& records) {
    bool any_fail = false, any_trunc = false;
    for (const json& r : records) {
        if (r["status"] == "fail") any_fail = true;
        if (r.contains("values") && r["values"].is_object() &&
            r["values"].value("truncated", false))
            any_trunc = true;
    }
    if (any_fail) return 1;
    if (any_trunc) return 2;
    return 0;
}

std::vector<double> dyadic_radii(int min_exp, int max_exp) {
    std::vector<double> rs;
    for (int k = min_exp; k <= max_exp; ++k) rs.push_back(std::ldexp(1.0, -k));
    return rs;
}

std::vector<cplx> circle_grid(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double jitter = uni(rng);
    std::vector<cplx> xs;
    for (int j = 0; j < n; ++j) {
        double t = kTwoPi * (j + jitter) / n;
        xs.push_back(cplx(std::cos(t), std::sin(t)));
    }
    return xs;
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

json rows_json(const CarlesonReport& rep) {
    json rows = json::array();
    for (const CarlesonRow& row : rep.rows) {
        json r = json::object();
        r["xi"] = complex_json(row.xi);
        r["r"] = row.r;
        r["value"] = row.value;
        r["ratio"] = row.ratio;
        r["diverged"] = row.diverged;
        r["truncated"] = row.truncated;
        rows.push_back(std::move(r));
    }
    return rows;
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

const json& queries_or_empty(const RunConfig& cfg) {
    static const json empty = json::object();
    return cfg.queries.is_null() ? empty : cfg.queries;
}

}  // namespace

// ---------------------------------------------------------------- group-build

CommandOutcome cmd_group_build(const RunConfig& cfg) {
    Timer timer;
    CommandOutcome out;
    out.report = report_skeleton("group-build", cfg);

    auto table = build_table(cfg);
    std::map<int, std::size_t> counts;
    double min_height = 1.0;
    for (const OrbitEntry& e : table->entries) {
        counts[e.word_length]++;
        min_height = std::min(min_height, e.height);
    }
    json count_json = json::object();
    for (const auto& [len, n] : counts) count_json[std::to_string(len)] = n;
    out.report["records"].push_back(make_record(
        "orbit_table", "entries of the truncated group, by word length",
        table->budget_exceeded ? "diagnostic" : "pass",
        {{"counts", count_json},
         {"total", table->entries.size()},
         {"min_height", min_height},
         {"truncated", table->budget_exceeded}},
        table->max_word_length));

    PoincareSums sums = poincare_partial_sums(*table, 1.0);
    out.report["records"].push_back(make_record(
        "poincare_partial_sums", "cumulative sum of (1-|g(0)|) and exp(-2 rho(0,g(0)))",
        "diagnostic", {{"height_sums", sums.height_sums}, {"exp_sums", sums.exp_sums}},
        table->max_word_length));

    std::vector<cplx> seeds;
    if (table->model == Model::disk)
        for (int k = 0; k < 8; ++k) seeds.push_back(std::polar(1.0, kTwoPi * k / 8.0));
    else
        for (double x : {0.0, 1.0, -1.0, 2.0, -2.0, 4.0, -4.0}) seeds.push_back(cplx(x, 0.0));
    std::vector<cplx> limit_pts = limit_set_sample(*table, seeds);
    json sample = json::array();
    for (std::size_t i = 0; i < std::min<std::size_t>(limit_pts.size(), 16); ++i)
        sample.push_back(complex_json(limit_pts[i]));
    out.report["records"].push_back(
        make_record("limit_set_sample", "orbit images of boundary seed points", "diagnostic",
                    {{"count", limit_pts.size()}, {"first_points", sample}},
                    table->max_word_length));

    FundamentalDomainView fd(*table);
    InfinityBoundary ib = fd.infinite_boundary(cfg.resolution);
    out.report["records"].push_back(make_record(
        "infinity_boundary", "free arcs and cusp points of the domain closure on the boundary",
        "diagnostic",
        {{"free_arc_count", ib.free_arcs.size()},
         {"free_measure", ib.free_measure},
         {"cusp_count", ib.cusps.size()}},
        table->max_word_length));

    out.exit_code = table->budget_exceeded ? 2 : 0;
    out.wall_seconds = timer.seconds();
    return out;
}

// ---------------------------------------------------------------- carleson

CommandOutcome cmd_carleson(const RunConfig& cfg) {
    Timer timer;
    CommandOutcome out;
    out.report = report_skeleton("carleson", cfg);
    const json& q = queries_or_empty(cfg);

    std::shared_ptr<OrbitTable> table;
    std::unique_ptr<FundamentalDomainView> fd;
    if (!cfg.group_spec.is_null()) {
        table = build_table(cfg);
        fd = std::make_unique<FundamentalDomainView>(*table);
    }
    FieldPtr field = build_field(cfg, cfg.field_spec, table);
    Model model = field->model();

    bool restrict_domain = q.value("restrict", false);
    if (restrict_domain && !fd) throw config_error("carleson: restriction needs a group");
    if (restrict_domain && fd->model() != model)
        throw config_error("carleson: field and group models differ");

    Weight weight = model == Model::disk ? Weight::disk_carleson : Weight::halfplane_carleson;
    if (q.value("weight", "") == std::string("halfplane_area")) weight = Weight::halfplane_area;

    std::vector<cplx> xis;
    if (q.contains("xi") && q["xi"].is_array()) {
        for (const json& x : q["xi"])
            xis.push_back(x.is_number() ? cplx(x.get<double>(), 0.0)
                                        : cplx(x[0].get<double>(), x[1].get<double>()));
    } else {
        int n = q.value("xi_count", 8);
        if (model == Model::disk) {
            xis = circle_grid(n, cfg.seed);
        } else {
            for (int j = 0; j < n; ++j) xis.push_back(cplx(-4.0 + 8.0 * j / (n - 1), 0.0));
        }
    }
    std::vector<double> rs;
    if (q.contains("r_values")) {
        for (const json& r : q["r_values"]) rs.push_back(r.get<double>());
    } else {
        rs = dyadic_radii(q.value("r_min_exp", model == Model::disk ? 0 : 1),
                          q.value("r_max_exp", 6));
    }

    CarlesonReport rep = carleson_norm_estimate(*field, xis, rs, weight, model,
                                                restrict_domain ? fd.get() : nullptr,
                                                cfg.quad_tol, cfg.workers);
    out.report["records"].push_back(make_record(
        "carleson_norm", "sup over the query grid of I(xi, r) / r",
        rep.any_diverged ? "fail" : "pass",
        {{"sup_ratio", rep.sup_ratio},
         {"argmax_xi", complex_json(rep.rows.empty() ? cplx(0) : rep.rows[rep.argmax_index].xi)},
         {"argmax_r", rep.rows.empty() ? 0.0 : rep.rows[rep.argmax_index].r},
         {"any_diverged", rep.any_diverged},
         {"truncated", rep.any_truncated},
         {"restriction", rep.restriction_descriptor},
         {"rows", rows_json(rep)}},
        table ? table->max_word_length : 0));

    out.exit_code = rep.any_diverged ? 1 : (rep.any_truncated ? 2 : 0);
    out.wall_seconds = timer.seconds();
    return out;
}

// ---------------------------------------------------------------- verify-thm13

CommandOutcome cmd_verify_thm13(const RunConfig& cfg) {
    Timer timer;
    CommandOutcome out;
    out.report = report_skeleton("verify-thm13", cfg);
    const json& q = queries_or_empty(cfg);

    RunConfig local = cfg;
    if (local.group_spec.is_null())
        local.group_spec = json{{"kind", "schottky_pairs"}, {"pairs", {{{-3.0, 1.0}, {3.0, 1.0}}}}};
    auto table_native = build_table(local);
    std::shared_ptr<OrbitTable> table =
        table_native->model == Model::halfplane
            ? std::make_shared<OrbitTable>(cayley_conjugate(*table_native))
            : table_native;
    FundamentalDomainView fd(*table);

    json field_spec = local.field_spec;
    if (field_spec.is_null())
        field_spec = json{{"kind", "invariant_extension"},
                          {"base",
                           {{"kind", "constant_on_disks"},
                            {"model", "disk"},
                            {"value", 0.5},
                            {"disks", {{0.0, 0.0, 0.2}}}}}};
    FieldPtr field = build_field(local, field_spec, table);
    auto ext = std::dynamic_pointer_cast<const InvariantExtensionField>(field);

    const int depth = table->max_word_length;
    const double tol = cfg.quad_tol;

    // (a) cap bound over the boundary at infinity of the domain
    InfinityBoundary ib = fd.infinite_boundary(cfg.resolution);
    std::vector<cplx> xis;
    int want = q.value("xi_count", 8);
    for (const BoundaryArc& arc : ib.free_arcs) {
        for (double frac : {0.5, 0.25, 0.75}) {
            if (static_cast<int>(xis.size()) >= want) break;
            double t = arc.lo + frac * arc.length();
            xis.push_back(cplx(std::cos(t), std::sin(t)));
        }
    }
    for (const CuspInfo& c : ib.cusps)
        if (static_cast<int>(xis.size()) < want + 4) xis.push_back(c.position);
    std::vector<double> rs = dyadic_radii(0, q.value("r_max_exp", 5));
    CarlesonReport rep_a = carleson_norm_estimate(*field, xis, rs, Weight::disk_carleson,
                                                  Model::disk, &fd, tol, cfg.workers);
    bool pass_a = !rep_a.any_diverged && !rep_a.any_truncated && !xis.empty();
    double c_hat = rep_a.sup_ratio;
    out.report["records"].push_back(make_record(
        "free_edge_cap_bound",
        "sup over free-edge caps of integral |mu|^2 chi_F / (1-|z|^2) over B(xi,r), divided by r",
        pass_a ? "pass" : "fail",
        {{"sup_ratio", c_hat},
         {"xi_count", xis.size()},
         {"any_diverged", rep_a.any_diverged},
         {"truncated", rep_a.any_truncated},
         {"rows", rows_json(rep_a)}},
        depth));

    // (b) orbit change of variables
    if (ext) {
        cplx direction(1.0, 0.0);
        for (const OrbitEntry& e : table->entries)
            if (e.word_length == 1) {
                direction = e.base_image / std::abs(e.base_image);
                break;
            }
        CarlesonQuery oq;
        oq.xi = direction;
        oq.r = q.value("orbit_r", 1.2);
        oq.weight = Weight::disk_carleson;
        oq.model = Model::disk;
        OrbitDecompositionResult od = orbit_decomposition_check(*ext, oq, tol);
        bool pass_b = od.residual <= 5.0 * tol && !od.lhs.diverged;
        out.report["records"].push_back(make_record(
            "orbit_decomposition",
            "cap integral of |mu|^2/(1-|z|^2) versus the sum over enumerated g of the "
            "transported domain integral",
            pass_b ? "pass" : "fail",
            {{"lhs", od.lhs.value},
             {"rhs", od.rhs},
             {"residual", od.residual},
             {"active_terms", od.active_terms},
             {"last_level_increment",
              od.rhs_level_increments.empty() ? 0.0 : od.rhs_level_increments.back()},
             {"truncated", od.lhs.truncated}},
            depth));
    }

    // (c) tile boundary length partial sums
    auto ls = fd.length_sum_partials(depth);
    bool pass_c = ls.level_increments.size() >= 3;
    for (std::size_t l = 2; l < ls.level_increments.size() && pass_c; ++l)
        if (ls.level_increments[l] > ls.level_increments[l - 1]) pass_c = false;
    double decay_ratio = ls.level_increments.size() >= 2 && ls.level_increments[1] > 0.0
                             ? ls.level_increments.back() / ls.level_increments[1]
                             : 1.0;
    pass_c = pass_c && decay_ratio < 0.5;
    out.report["records"].push_back(make_record(
        "tile_length_partial_sums", "sum over tiles of the Euclidean boundary length, by level",
        pass_c ? "pass" : "fail",
        {{"partial_sums", ls.partial_sums},
         {"level_increments", ls.level_increments},
         {"last_to_first_ratio", decay_ratio}},
        depth));

    // (d) global estimate, diagnostic
    std::vector<cplx> global_xis = circle_grid(q.value("global_xi_count", 16), cfg.seed);
    std::vector<double> global_rs = dyadic_radii(0, 3);
    CarlesonReport rep_d = carleson_norm_estimate(*field, global_xis, global_rs,
                                                  Weight::disk_carleson, Model::disk, nullptr,
                                                  tol, cfg.workers);
    out.report["records"].push_back(make_record(
        "global_cap_bound", "sup over all boundary caps of the unrestricted ratio",
        rep_d.any_diverged ? "fail" : "diagnostic",
        {{"sup_ratio", rep_d.sup_ratio},
         {"ratio_to_free_edge_constant", c_hat > 0.0 ? rep_d.sup_ratio / c_hat : 0.0},
         {"any_diverged", rep_d.any_diverged},
         {"truncated", rep_d.any_truncated}},
        depth));

    out.exit_code = combine_exit(out.report["records"]);
    out.wall_seconds = timer.seconds();
    return out;
}

// ---------------------------------------------------------------- verify-sec4

namespace {

struct Sec4Cusp {
    double x = 0.0;
    double ra = 0.0, rb = 0.0;
    Word word;
};

std::vector<Sec4Cusp> detect_sec4_cusps(const FundamentalDomainView& fd, double resolution) {
    InfinityBoundary ib = fd.infinite_boundary(resolution);
    std::vector<Sec4Cusp> cusps;
    for (const CuspInfo& c : ib.cusps) {
        if (!std::isfinite(c.radius_a) || !std::isfinite(c.radius_b)) continue;
        cusps.push_back({c.coordinate, c.radius_a, c.radius_b, c.parabolic_word});
    }
    std::sort(cusps.begin(), cusps.end(), [](const Sec4Cusp& a, const Sec4Cusp& b) {
        if (std::abs(a.x) != std::abs(b.x)) return std::abs(a.x) < std::abs(b.x);
        return a.x < b.x;
    });
    return cusps;
}

}  // namespace

CommandOutcome cmd_verify_sec4(const RunConfig& cfg) {
    Timer timer;
    CommandOutcome out;
    out.report = report_skeleton("verify-sec4", cfg);
    const json& q = queries_or_empty(cfg);

    RunConfig local = cfg;
    if (local.group_spec.is_null()) local.group_spec = json{{"kind", "rubel_ryff"}, {"n_max", 4}};
    if (local.group_spec.value("kind", "") != "rubel_ryff")
        throw config_error("verify-sec4 runs on the rubel_ryff group");
    auto table_h = build_table(local);
    FundamentalDomainView fd_h(*table_h);
    const int depth = table_h->max_word_length;
    const double tol = cfg.quad_tol;
    double c_value = 0.5;
    if (!local.field_spec.is_null() && local.field_spec.contains("value"))
        c_value = local.field_spec["value"].is_number()
                      ? local.field_spec["value"].get<double>()
                      : local.field_spec["value"][0].get<double>();
    const double ball_radius = q.value("ball_radius", 1.0);

    // (a) cusps and adjacent side radii
    std::vector<Sec4Cusp> cusps = detect_sec4_cusps(fd_h, cfg.resolution);
    bool zero_cusp_ok = false;
    json cusp_list = json::array();
    for (const Sec4Cusp& c : cusps) {
        cusp_list.push_back(json{{"x", c.x},
                                 {"radius_a", c.ra},
                                 {"radius_b", c.rb},
                                 {"word", word_label(c.word, table_h->gens.labels)}});
        if (std::abs(c.x) < 1e-9 && std::abs(c.ra - 1.0) < 1e-6 && std::abs(c.rb - 1.0) < 1e-6)
            zero_cusp_ok = true;
    }
    bool pass_a = zero_cusp_ok && cusps.size() >= 3;
    out.report["records"].push_back(make_record(
        "cusp_detection", "parabolic boundary points of the domain with adjacent side radii",
        pass_a ? "pass" : "fail",
        {{"count", cusps.size()}, {"zero_cusp_unit_radii", zero_cusp_ok}, {"cusps", cusp_list}},
        depth));

    // (b) hyperbolic areas of the cusp neighborhoods against the closed form
    json area_rows = json::array();
    bool pass_b = !cusps.empty();
    std::vector<double> areas;
    for (const Sec4Cusp& c : cusps) {
        double reach = 2.0 * std::min(c.ra, c.rb);
        double R_eff = std::min(ball_radius, 0.999 * reach);
        CarlesonQuery aq;
        aq.xi = cplx(c.x, 0.0);
        aq.r = R_eff;
        aq.weight = Weight::halfplane_area;
        aq.model = Model::halfplane;
        aq.restriction = &fd_h;
        IntegralResult area = weighted_area(aq, tol);
        double sector = cusp_sector_integral(c.ra, c.rb, R_eff, 1e-10);
        double bound = reach > 1.0 ? cusp_area_bound(c.ra, c.rb) : sector;
        double inner_limit = cusp_inner_integral(1e-6, c.ra, c.rb);
        double limit_closed = 0.125 * (1.0 / c.ra + 1.0 / c.rb);
        bool ok = !area.diverged && area.value <= sector + 5.0 * tol &&
                  (reach <= 1.0 || sector <= bound + 1e-9) &&
                  std::abs(inner_limit - limit_closed) <= 1e-6 * limit_closed;
        pass_b = pass_b && ok;
        areas.push_back(area.value);
        area_rows.push_back(json{{"x", c.x},
                                 {"area", area.value},
                                 {"sector_integral", sector},
                                 {"area_bound", bound},
                                 {"R", R_eff},
                                 {"inner_limit_check", inner_limit / limit_closed},
                                 {"ok", ok}});
    }
    out.report["records"].push_back(make_record(
        "cusp_areas",
        "hyperbolic area (density 1/(4 Im^2)) of B(cusp, R) within the domain versus the "
        "closed-form sector integral and its bound",
        pass_b ? "pass" : "fail", {{"rows", area_rows}}, depth));

    // (c) partial sums of the areas decay geometrically by dyadic level
    std::map<int, double> level_sums;
    for (std::size_t i = 0; i < cusps.size(); ++i) {
        double ax = std::abs(cusps[i].x);
        int level = ax < 0.5 ? 0 : static_cast<int>(std::lround(std::log2(ax))) + 1;
        level_sums[level] += areas[i];
    }
    std::vector<double> level_vec, cum;
    double acc = 0.0;
    for (const auto& [lvl, s] : level_sums) {
        level_vec.push_back(s);
        acc += s;
        cum.push_back(acc);
    }
    bool pass_c = level_vec.size() >= 3;
    std::vector<double> ratios;
    for (std::size_t k = 2; k < level_vec.size(); ++k) {
        double ratio = level_vec[k] / level_vec[k - 1];
        ratios.push_back(ratio);
        if (!(ratio <= 0.8)) pass_c = false;
    }
    out.report["records"].push_back(make_record(
        "cusp_area_partial_sums",
        "cumulative cusp neighborhood areas by dyadic level, with level-to-level ratios",
        pass_c ? "pass" : "fail",
        {{"level_sums", level_vec}, {"partial_sums", cum}, {"ratios", ratios}}, depth));

    // (d) cap bound at the cusps for the ball-supported field, halfplane side
    std::vector<Disk> balls;
    for (const Sec4Cusp& c : cusps) balls.push_back(Disk{cplx(c.x, 0.0), ball_radius});
    FieldPtr field_h = constant_on_disks(Model::halfplane, c_value, balls);
    std::vector<cplx> cusp_xis;
    for (const Sec4Cusp& c : cusps) cusp_xis.push_back(cplx(c.x, 0.0));
    int r_max_exp = q.value("r_max_exp", 6);
    std::vector<double> rs = dyadic_radii(1, r_max_exp);
    CarlesonReport rep_d = carleson_norm_estimate(*field_h, cusp_xis, rs,
                                                  Weight::halfplane_carleson, Model::halfplane,
                                                  &fd_h, tol, cfg.workers);
    auto sup_up_to = [&](const CarlesonReport& rep, double r_min) {
        double s = 0.0;
        for (const CarlesonRow& row : rep.rows)
            if (row.r >= r_min - 1e-15) s = std::max(s, row.ratio);
        return s;
    };
    json stability = json::object();
    double prev_sup = -1.0;
    double max_rel_change = 0.0;
    for (int K = r_max_exp - 2; K <= r_max_exp; ++K) {
        double s = sup_up_to(rep_d, std::ldexp(1.0, -K));
        stability[std::to_string(K)] = s;
        if (prev_sup > 0.0)
            max_rel_change = std::max(max_rel_change, std::abs(s - prev_sup) / prev_sup);
        prev_sup = s;
    }
    bool pass_d = !rep_d.any_diverged && !rep_d.any_truncated && max_rel_change < 0.10;
    out.report["records"].push_back(make_record(
        "cusp_cap_bound_halfplane",
        "sup over cusps and dyadic r of integral |mu|^2 chi_F / Im(z) over B(cusp, r), "
        "divided by r",
        pass_d ? "pass" : "fail",
        {{"sup_ratio", rep_d.sup_ratio},
         {"sup_by_grid_level", stability},
         {"max_rel_change", max_rel_change},
         {"any_diverged", rep_d.any_diverged},
         {"truncated", rep_d.any_truncated},
         {"rows", rows_json(rep_d)}},
        depth));

    // (e) the same bound after transport to the disk
    auto table_d = std::make_shared<OrbitTable>(cayley_conjugate(*table_h));
    FundamentalDomainView fd_d(*table_d);
    std::vector<cplx> cusp_xis_d;
    std::vector<Disk> balls_d;
    MoebiusMap kappa = cayley_as_map();
    for (const Sec4Cusp& c : cusps) {
        cusp_xis_d.push_back(cayley(cplx(c.x, 0.0)));
        Circle img = map_circle(kappa, Circle{cplx(c.x, 0.0), ball_radius});
        balls_d.push_back(Disk{img.center, img.radius});
    }
    FieldPtr field_d = constant_on_disks(Model::disk, c_value, balls_d);
    CarlesonReport rep_e = carleson_norm_estimate(*field_d, cusp_xis_d, rs, Weight::disk_carleson,
                                                  Model::disk, &fd_d, tol, cfg.workers);
    json stability_e = json::object();
    prev_sup = -1.0;
    double max_rel_change_e = 0.0;
    for (int K = r_max_exp - 2; K <= r_max_exp; ++K) {
        double s = sup_up_to(rep_e, std::ldexp(1.0, -K));
        stability_e[std::to_string(K)] = s;
        if (prev_sup > 0.0)
            max_rel_change_e = std::max(max_rel_change_e, std::abs(s - prev_sup) / prev_sup);
        prev_sup = s;
    }
    bool pass_e = !rep_e.any_diverged && !rep_e.any_truncated && max_rel_change_e < 0.10;

    // pointwise link between the transported modulus and the disk-side field
    auto mu_star = invariant_extension(field_h, table_h);
    FieldPtr mu0 = cayley_pullback(mu_star);
    double max_link_diff = 0.0;
    for (const Sec4Cusp& c : cusps) {
        cplx zh = cplx(c.x, 0.0) + cplx(0.0, 0.4 * std::min(1.0, std::min(c.ra, c.rb)));
        cplx zd = cayley(zh);
        max_link_diff = std::max(
            max_link_diff, std::abs(std::abs(mu0->evaluate(zd)) - std::abs(field_d->evaluate(zd))));
    }
    out.report["records"].push_back(make_record(
        "cusp_cap_bound_disk",
        "the halfplane cap bound transported through the Cayley map: integral "
        "|mu0|^2 chi_F0 / (1-|z|^2) over B(kappa(cusp), r), divided by r",
        pass_e ? "pass" : "fail",
        {{"sup_ratio", rep_e.sup_ratio},
         {"sup_by_grid_level", stability_e},
         {"max_rel_change", max_rel_change_e},
         {"pullback_modulus_max_diff", max_link_diff},
         {"any_diverged", rep_e.any_diverged},
         {"truncated", rep_e.any_truncated},
         {"rows", rows_json(rep_e)}},
        depth));

    // (f) diagnostic: unrestricted global sup per depth
    json global = json::object();
    for (int d = std::max(1, depth - 1); d <= depth; ++d) {
        RunConfig shallow = local;
        shallow.max_word_length = d;
        auto t_h = d == depth ? table_h : build_table(shallow);
        auto ext_h = invariant_extension(constant_on_disks(Model::halfplane, c_value, balls), t_h);
        FieldPtr mu0_d = cayley_pullback(ext_h);
        std::vector<cplx> global_xis = circle_grid(q.value("global_xi_count", 12), cfg.seed);
        std::vector<double> global_rs = dyadic_radii(0, 3);
        CarlesonReport rep_f =
            carleson_norm_estimate(*mu0_d, global_xis, global_rs, Weight::disk_carleson,
                                   Model::disk, nullptr, std::max(tol, 1e-5), cfg.workers);
        global[std::to_string(d)] = json{{"sup_ratio", rep_f.sup_ratio},
                                         {"any_diverged", rep_f.any_diverged},
                                         {"truncation_events", ext_h->truncation_events()}};
    }
    out.report["records"].push_back(make_record(
        "global_sup_trend",
        "unrestricted sup of the disk ratio for the transported field, per enumeration depth",
        "diagnostic", global, depth));

    out.exit_code = combine_exit(out.report["records"]);
    out.wall_seconds = timer.seconds();
    return out;
}

// ---------------------------------------------------------------- render

CommandOutcome cmd_render(const RunConfig& cfg) {
    Timer timer;
    CommandOutcome out;
    out.report = report_skeleton("render", cfg);
    std::filesystem::create_directories(cfg.out_dir);

    auto table = build_table(cfg);
    FundamentalDomainView fd(*table);
    json files = json::array();

    std::string domain_path = cfg.out_dir + "/domain.svg";
    render_domain(fd, domain_path);
    files.push_back(domain_path);

    std::shared_ptr<OrbitTable> table_d =
        table->model == Model::halfplane ? std::make_shared<OrbitTable>(cayley_conjugate(*table))
                                         : table;
    FundamentalDomainView fd_d(*table_d);
    std::string tiling_path = cfg.out_dir + "/tiling.svg";
    render_tiling(fd_d, table_d->max_word_length, tiling_path);
    files.push_back(tiling_path);

    std::vector<cplx> seeds;
    for (int k = 0; k < 8; ++k) seeds.push_back(std::polar(1.0, kTwoPi * k / 8.0));
    std::string limit_path = cfg.out_dir + "/limitset.svg";
    render_limit_set(limit_set_sample(*table_d, seeds), Model::disk, limit_path);
    files.push_back(limit_path);

    if (!cfg.field_spec.is_null()) {
        FieldPtr field = build_field(cfg, cfg.field_spec, table_d);
        std::string field_path = cfg.out_dir + "/field.svg";
        render_field(*field, field_path);
        files.push_back(field_path);
    }

    out.report["records"].push_back(make_record("render", "generated figures", "pass",
                                                {{"files", files}}, table->max_word_length));
    out.wall_seconds = timer.seconds();
    return out;
}

// ---------------------------------------------------------------- denjoy

CommandOutcome cmd_denjoy_homogeneity(const RunConfig& cfg) {
    Timer timer;
    CommandOutcome out;
    out.report = report_skeleton("denjoy-homogeneity", cfg);
    const json& spec = cfg.denjoy_spec;
    if (spec.is_null()) throw config_error("denjoy-homogeneity needs a 'denjoy' section");

    std::string kind = spec.value("set", "intervals");
    if (kind == "intervals" || kind == "cantor") {
        IntervalUnion E;
        if (kind == "intervals") {
            std::vector<std::pair<double, double>> iv;
            for (const json& p : spec.at("intervals"))
                iv.emplace_back(p[0].get<double>(), p[1].get<double>());
            E = IntervalUnion(std::move(iv));
        } else {
            E = cantor_set(spec.value("levels", 8), spec.value("fraction", 1.0 / 3.0));
        }
        double h = homogeneity_constant(E);
        out.report["records"].push_back(make_record(
            "homogeneity_constant", "inf over x in E, t < diam E of |E cap (x-t,x+t)| / t",
            "diagnostic",
            {{"value", h},
             {"total_length", E.total_length()},
             {"diameter", E.diameter()},
             {"interval_count", E.intervals().size()}},
            0));
    } else if (kind == "points" || kind == "group_limit_set") {
        std::vector<double> pts;
        if (kind == "points") {
            for (const json& p : spec.at("points")) pts.push_back(p.get<double>());
        } else {
            auto table = build_table(cfg);
            if (table->model != Model::halfplane)
                throw config_error("group_limit_set homogeneity needs a halfplane group");
            std::vector<cplx> seeds;
            for (double x : {0.0, 1.0, -1.0, 2.0, -2.0}) seeds.push_back(cplx(x, 0.0));
            for (cplx z : limit_set_sample(*table, seeds)) pts.push_back(z.real());
        }
        double eps = spec.value("epsilon", 0.1);
        HomogeneityScales hs = limit_set_homogeneity(pts, eps);
        json scales = json::array();
        for (const auto& [e, v] : hs.scales) scales.push_back(json{{"epsilon", e}, {"value", v}});
        out.report["records"].push_back(
            make_record("coarsened_homogeneity",
                        "homogeneity of the epsilon-covering of the sampled set, at three scales",
                        "diagnostic", {{"point_count", pts.size()}, {"scales", scales}}, 0));
    } else {
        throw config_error("denjoy: unknown set kind '" + kind + "'");
    }
    out.wall_seconds = timer.seconds();
    return out;
}

// ---------------------------------------------------------------- text format

std::string render_text_report(const CommandOutcome& outcome) {
    std::ostringstream os;
    os << "command: " << outcome.report["command"].get<std::string>() << "\n";
    for (const json& r : outcome.report["records"]) {
        os << "[" << r["status"].get<std::string>() << "] " << r["name"].get<std::string>()
           << " (depth " << r["depth"] << ")\n";
        os << "    " << r["quantity"].get<std::string>() << "\n";
        json vals = r["values"];
        vals.erase("rows");
        os << "    " << vals.dump() << "\n";
    }
    os << "exit: " << outcome.exit_code << "\n";
    os << "wall_clock_seconds: " << outcome.wall_seconds << "\n";
    return os.str();
}

}  // namespace fgt
