#pragma once

#include <string>
#include <vector>

#include "fgt/beltrami.hpp"
#include "fgt/fundomain.hpp"

namespace fgt {

// Minimal SVG writer: world coordinates, y up, mapped to a square viewport.
class SvgCanvas {
public:
    SvgCanvas(double world_lo_x, double world_lo_y, double world_hi_x, double world_hi_y,
              int pixels = 800);

    void line(cplx a, cplx b, const std::string& stroke, double width = 1.0);
    void polyline(const std::vector<cplx>& pts, const std::string& stroke, double width = 1.0);
    void circle(cplx center, double radius, const std::string& stroke,
                const std::string& fill = "none", double width = 1.0, double opacity = 1.0);
    // circular arc from angle a0 to a1 (radians, counterclockwise)
    void arc(cplx center, double radius, double a0, double a1, const std::string& stroke,
             double width = 1.0);
    void dot(cplx center, double radius_px, const std::string& fill);
    void rect(cplx lo, cplx hi, const std::string& fill, double opacity);
    void text(cplx at, const std::string& s, int size_px = 12);

    std::string str() const;
    void write(const std::string& path) const;

private:
    double lx_, ly_, hx_, hy_;
    int px_;
    std::string body_;
    double X(double x) const;
    double Y(double y) const;
    double S(double len) const;
};

std::string level_color(int level);

// domain boundary, sides, free arcs and cusps
void render_domain(const FundamentalDomainView& fd, const std::string& path);
// tiles of all table words, colored by word length
void render_tiling(const FundamentalDomainView& fd, int max_depth, const std::string& path);
// |mu|^2 heatmap on a grid
void render_field(const BeltramiField& field, const std::string& path, int grid = 128);
// boundary scatter of limit-set samples
void render_limit_set(const std::vector<cplx>& points, Model model, const std::string& path);

}  // namespace fgt
