#include <cstdio>
#include <sstream>

#include "hexaplan/error.hpp"
#include "hexaplan/render.hpp"

namespace hexaplan {

namespace {

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b",
                                "#e377c2", "#17becf", "#bcbd22", "#ff7f0e", "#7f7f7f"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    std::string s = buf;
    if (s == "-0.000") s = "0.000";
    return s;
}

class Svg {
public:
    Svg(Bbox box, double scale) : box_(box), scale_(scale) {}
    std::string x(double v) const { return num((v - box_.lo.x) * scale_); }
    std::string y(double v) const { return num((box_.hi.y - v) * scale_); }
    std::string len(double v) const { return num(v * scale_); }
    std::string pt(Point p) const { return x(p.x) + "," + y(p.y); }
    std::string path(const Ring& ring) const {
        std::string d;
        for (std::size_t k = 0; k < ring.size(); ++k) d += (k ? " L" : "M") + pt(ring[k]);
        return d + " Z";
    }

private:
    Bbox box_;
    double scale_;
};

}  // namespace

std::string render_svg(const RenderInput& in) {
    if (!in.env) throw Error(ErrorKind::input, "render needs an environment");
    const Environment& env = *in.env;
    Bbox box = env.bbox();
    const double margin = 1.0;
    box.lo = box.lo - Point{margin, margin};
    box.hi = box.hi + Point{margin, margin};
    const Svg s(box, in.scale);
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << s.len(box.width()) << "\" height=\""
        << s.len(box.height()) << "\" viewBox=\"0 0 " << s.len(box.width()) << " " << s.len(box.height()) << "\">\n";

    out << "<g id=\"obstacles\">\n";
    out << "<path d=\"" << s.path(env.outer);
    for (const Ring& h : env.holes) out << " " << s.path(h);
    out << "\" fill=\"#ffffff\" fill-rule=\"evenodd\" stroke=\"#000000\" stroke-width=\"1.5\"/>\n";
    for (const Ring& h : env.holes) out << "<path d=\"" << s.path(h) << "\" fill=\"#9a9a9a\" stroke=\"none\"/>\n";
    out << "</g>\n";

    if (in.cspace) {
        out << "<g id=\"cspace\" fill=\"none\" stroke=\"#4a90d9\" stroke-width=\"0.8\" stroke-dasharray=\"4,3\">\n";
        for (const auto& region : in.cspace->regions()) {
            out << "<path d=\"" << s.path(region.outer) << "\"/>\n";
            for (const Ring& h : region.holes) out << "<path d=\"" << s.path(h) << "\"/>\n";
        }
        out << "</g>\n";
    }

    if (in.roadmap) {
        const Roadmap& rm = *in.roadmap;
        out << "<g id=\"roadmap\">\n";
        for (const auto& e : rm.edges) {
            if (e.kind != EdgeKind::lattice) continue;
            out << "<line x1=\"" << s.x(rm.nodes[e.a].x) << "\" y1=\"" << s.y(rm.nodes[e.a].y) << "\" x2=\""
                << s.x(rm.nodes[e.b].x) << "\" y2=\"" << s.y(rm.nodes[e.b].y)
                << "\" stroke=\"#b0b0b0\" stroke-width=\"1\"/>\n";
        }
        for (const auto& e : rm.edges) {
            if (e.kind != EdgeKind::bridge) continue;
            out << "<polyline points=\"";
            const auto poly = e.polyline(rm.nodes);
            for (std::size_t k = 0; k < poly.size(); ++k) out << (k ? " " : "") << s.pt(poly[k]);
            out << "\" fill=\"none\" stroke=\"#e67e22\" stroke-width=\"2\"/>\n";
        }
        for (const Point& p : rm.nodes)
            out << "<circle cx=\"" << s.x(p.x) << "\" cy=\"" << s.y(p.y) << "\" r=\"1.5\" fill=\"#808080\"/>\n";
        out << "</g>\n";
    }

    if (in.plan) {
        out << "<g id=\"trajectories\" fill=\"none\" stroke-width=\"1.5\">\n";
        for (std::size_t i = 0; i < in.plan->size(); ++i) {
            out << "<polyline stroke=\"" << kPalette[i % 10] << "\" points=\"";
            const auto& tr = in.plan->trajectories[i];
            for (std::size_t k = 0; k < tr.size(); ++k) out << (k ? " " : "") << s.pt(tr[k].p);
            out << "\"/>\n";
        }
        out << "</g>\n";
    }

    if (in.instance) {
        const double r = env.robot_radius;
        out << "<g id=\"robots\" font-family=\"sans-serif\" font-size=\"" << s.len(r) << "\" text-anchor=\"middle\">\n";
        auto disc = [&](Point p, std::size_t i, bool goal) {
            const char* color = kPalette[i % 10];
            out << "<circle cx=\"" << s.x(p.x) << "\" cy=\"" << s.y(p.y) << "\" r=\"" << s.len(r) << "\" fill=\""
                << (goal ? "none" : color) << "\" stroke=\"" << color << "\" stroke-width=\"1.5\""
                << (goal ? " stroke-dasharray=\"3,2\"" : "") << "/>\n";
            out << "<text x=\"" << s.x(p.x) << "\" y=\"" << s.y(p.y - 0.35 * r) << "\" fill=\""
                << (goal ? color : "#ffffff") << "\">" << i << "</text>\n";
        };
        for (std::size_t i = 0; i < in.instance->size(); ++i) disc(in.instance->starts[i], i, false);
        for (std::size_t i = 0; i < in.instance->size(); ++i) disc(in.instance->goals[i], i, true);
        out << "</g>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace hexaplan
