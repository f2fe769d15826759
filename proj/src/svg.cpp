#include "fgt/svg.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace fgt {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << std::fixed << v;
    return os.str();
}

}  // namespace

SvgCanvas::SvgCanvas(double lx, double ly, double hx, double hy, int pixels)
    : lx_(lx), ly_(ly), hx_(hx), hy_(hy), px_(pixels) {}

double SvgCanvas::X(double x) const { return (x - lx_) / (hx_ - lx_) * px_; }
double SvgCanvas::Y(double y) const { return (hy_ - y) / (hy_ - ly_) * px_; }
double SvgCanvas::S(double len) const { return len / (hx_ - lx_) * px_; }

void SvgCanvas::line(cplx a, cplx b, const std::string& stroke, double width) {
    body_ += "<line x1=\"" + fmt(X(a.real())) + "\" y1=\"" + fmt(Y(a.imag())) + "\" x2=\"" +
             fmt(X(b.real())) + "\" y2=\"" + fmt(Y(b.imag())) + "\" stroke=\"" + stroke +
             "\" stroke-width=\"" + fmt(width) + "\"/>\n";
}

void SvgCanvas::polyline(const std::vector<cplx>& pts, const std::string& stroke, double width) {
    if (pts.size() < 2) return;
    body_ += "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" + fmt(width) +
             "\" points=\"";
    for (cplx p : pts) body_ += fmt(X(p.real())) + "," + fmt(Y(p.imag())) + " ";
    body_ += "\"/>\n";
}

void SvgCanvas::circle(cplx center, double radius, const std::string& stroke,
                       const std::string& fill, double width, double opacity) {
    body_ += "<circle cx=\"" + fmt(X(center.real())) + "\" cy=\"" + fmt(Y(center.imag())) +
             "\" r=\"" + fmt(S(radius)) + "\" stroke=\"" + stroke + "\" fill=\"" + fill +
             "\" stroke-width=\"" + fmt(width) + "\" opacity=\"" + fmt(opacity) + "\"/>\n";
}

void SvgCanvas::arc(cplx center, double radius, double a0, double a1, const std::string& stroke,
                    double width) {
    std::vector<cplx> pts;
    int n = std::max(8, static_cast<int>(std::ceil(std::abs(a1 - a0) / 0.02)));
    for (int i = 0; i <= n; ++i) {
        double a = a0 + (a1 - a0) * i / n;
        pts.push_back(center + radius * cplx(std::cos(a), std::sin(a)));
    }
    polyline(pts, stroke, width);
}

void SvgCanvas::dot(cplx center, double radius_px, const std::string& fill) {
    body_ += "<circle cx=\"" + fmt(X(center.real())) + "\" cy=\"" + fmt(Y(center.imag())) +
             "\" r=\"" + fmt(radius_px) + "\" fill=\"" + fill + "\"/>\n";
}

void SvgCanvas::rect(cplx lo, cplx hi, const std::string& fill, double opacity) {
    body_ += "<rect x=\"" + fmt(X(lo.real())) + "\" y=\"" + fmt(Y(hi.imag())) + "\" width=\"" +
             fmt(S(hi.real() - lo.real())) + "\" height=\"" + fmt(S(hi.imag() - lo.imag())) +
             "\" fill=\"" + fill + "\" opacity=\"" + fmt(opacity) + "\"/>\n";
}

void SvgCanvas::text(cplx at, const std::string& s, int size_px) {
    body_ += "<text x=\"" + fmt(X(at.real())) + "\" y=\"" + fmt(Y(at.imag())) + "\" font-size=\"" +
             std::to_string(size_px) + "\" font-family=\"monospace\">" + s + "</text>\n";
}

std::string SvgCanvas::str() const {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(px_) +
           "\" height=\"" + std::to_string(px_) + "\" viewBox=\"0 0 " + std::to_string(px_) + " " +
           std::to_string(px_) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" +
           body_ + "</svg>\n";
}

void SvgCanvas::write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw error("cannot write " + path);
    out << str();
}

std::string level_color(int level) {
    static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    return palette[level % 10];
}

namespace {

SvgCanvas canvas_for(Model model, double span = 1.05) {
    if (model == Model::disk) return SvgCanvas(-span, -span, span, span);
    return SvgCanvas(-span * 8, -0.4, span * 8, 2.0 * span * 8 - 0.4);
}

void draw_model_boundary(SvgCanvas& c, Model model) {
    if (model == Model::disk)
        c.circle(0.0, 1.0, "black");
    else
        c.line(cplx(-1e4, 0.0), cplx(1e4, 0.0), "black");
}

}  // namespace

void render_domain(const FundamentalDomainView& fd, const std::string& path) {
    SvgCanvas c = canvas_for(fd.model());
    draw_model_boundary(c, fd.model());
    for (const GeodesicSide& s : fd.sides()) {
        const Bisector& b = s.geometry;
        if (b.is_line)
            c.line(cplx(b.line_x, 0.0), cplx(b.line_x, 1e4), "#d62728", 1.2);
        else if (fd.model() == Model::disk)
            c.circle(b.center, b.radius, "#d62728", "none", 1.2);
        else
            c.arc(b.center, b.radius, 0.0, std::numbers::pi, "#d62728", 1.2);
    }
    InfinityBoundary ib = fd.infinite_boundary(1e-6);
    for (const BoundaryArc& a : ib.free_arcs) {
        if (fd.model() == Model::disk)
            c.arc(0.0, 1.0, a.lo, a.hi, "#2ca02c", 4.0);
        else
            c.line(cplx(a.lo, 0.0), cplx(a.hi, 0.0), "#2ca02c", 4.0);
    }
    for (const CuspInfo& cusp : ib.cusps) c.dot(cusp.position, 4.0, "#9467bd");
    c.dot(fd.base_point(), 3.0, "black");
    c.write(path);
}

void render_tiling(const FundamentalDomainView& fd, int max_depth, const std::string& path) {
    if (fd.model() != Model::disk)
        throw model_mismatch_error("render_tiling: disk model only (conjugate first)");
    SvgCanvas c = canvas_for(fd.model());
    draw_model_boundary(c, fd.model());
    auto pieces = fd.boundary_polyline(1e-3);
    for (const OrbitEntry& e : fd.table().entries) {
        if (e.word_length > max_depth) continue;
        for (const auto& piece : pieces) {
            std::vector<cplx> img;
            img.reserve(piece.size());
            for (cplx z : piece) img.push_back(fgt::apply(e.map, z));
            c.polyline(img, level_color(e.word_length), e.word_length == 0 ? 1.6 : 0.8);
        }
    }
    c.write(path);
}

void render_field(const BeltramiField& field, const std::string& path, int grid) {
    SvgCanvas c = canvas_for(field.model());
    double lo_x = field.model() == Model::disk ? -1.0 : -8.0;
    double hi_x = field.model() == Model::disk ? 1.0 : 8.0;
    double lo_y = field.model() == Model::disk ? -1.0 : 0.0;
    double hi_y = field.model() == Model::disk ? 1.0 : 16.0;
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            double x = lo_x + (hi_x - lo_x) * (i + 0.5) / grid;
            double y = lo_y + (hi_y - lo_y) * (j + 0.5) / grid;
            cplx z(x, y);
            if (field.model() == Model::disk && std::abs(z) >= 1.0) continue;
            if (field.model() == Model::halfplane && y <= 0.0) continue;
            double v = std::norm(field.evaluate(z));
            if (v <= 0.0) continue;
            cplx cell_lo(lo_x + (hi_x - lo_x) * i / grid, lo_y + (hi_y - lo_y) * j / grid);
            cplx cell_hi(lo_x + (hi_x - lo_x) * (i + 1.0) / grid,
                         lo_y + (hi_y - lo_y) * (j + 1.0) / grid);
            c.rect(cell_lo, cell_hi, "#1f77b4", std::min(1.0, v / 0.25));
        }
    }
    draw_model_boundary(c, field.model());
    c.write(path);
}

void render_limit_set(const std::vector<cplx>& points, Model model, const std::string& path) {
    SvgCanvas c = canvas_for(model);
    draw_model_boundary(c, model);
    for (cplx p : points) c.dot(p, 1.5, "#d62728");
    c.write(path);
}

}  // namespace fgt
