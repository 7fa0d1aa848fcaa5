#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <variant>

#include "annulus/geometry.hpp"

namespace annulus {

// side classes of a boundary piece relative to the ring
enum class PieceClass { Xi0Side, TangentSide, Chord, Free, InnerArc, OuterArc, Arc };

inline const char* to_string(PieceClass c) {
  switch (c) {
    case PieceClass::Xi0Side: return "xi0-side";
    case PieceClass::TangentSide: return "tangent-side";
    case PieceClass::Chord: return "chord";
    case PieceClass::Free: return "free";
    case PieceClass::InnerArc: return "inner-arc";
    case PieceClass::OuterArc: return "outer-arc";
    default: return "arc";
  }
}

inline PieceClass classify_piece(const BoundaryPiece& pc, double a, double b, double tol = 1e-7) {
  if (auto arc = std::get_if<Arc>(&pc)) {
    if (a > 0 && std::abs(arc->radius - a) <= tol * b) return PieceClass::InnerArc;
    if (std::abs(arc->radius - b) <= tol * b) return PieceClass::OuterArc;
    return PieceClass::Arc;
  }
  auto const& s = std::get<Segment>(pc);
  Point d = s.end - s.start;
  double len = norm(d);
  double dist = len > 0 ? std::abs(cross(s.start, d)) / len : norm(s.start);
  // foot of the perpendicular must lie on the segment for a true tangency
  double t = len > 0 ? -dot(s.start, d) / (len * len) : 0.0;
  bool touches = a > 0 && std::abs(dist - a) <= tol * b && t >= -tol && t <= 1 + tol;
  bool chord = std::abs(norm(s.start) - b) <= tol * b && std::abs(norm(s.end) - b) <= tol * b;
  if (touches && chord) return PieceClass::Xi0Side;
  if (touches) return PieceClass::TangentSide;
  if (chord) return PieceClass::Chord;
  return PieceClass::Free;
}

namespace detail {

inline std::string fx(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", std::abs(v) < 5e-7 ? 0.0 : v);
  return buf;
}

inline const char* class_color(PieceClass c) {
  switch (c) {
    case PieceClass::Xi0Side: return "#c0392b";
    case PieceClass::TangentSide: return "#2471a3";
    case PieceClass::Chord: return "#1e8449";
    case PieceClass::InnerArc: return "#7d3c98";
    case PieceClass::OuterArc: return "#b9770e";
    default: return "#555555";
  }
}

// y is flipped so the picture reads counterclockwise
inline std::string pt(Point p) { return fx(p.x) + "," + fx(-p.y); }

inline std::string arc_cmd(const Arc& a) {
  // split into at most quarter-turn pieces; keeps full circles representable
  int n = std::max(1, static_cast<int>(std::ceil(a.angle_sweep / (pi / 2) - 1e-12)));
  std::string s;
  for (int i = 1; i <= n; ++i) {
    Point e = a.radius * unit(a.angle_start + a.angle_sweep * i / n);
    s += " A" + fx(a.radius) + "," + fx(a.radius) + " 0 0 0 " + pt(e);
  }
  return s;
}

inline std::string piece_path(const BoundaryPiece& pc) {
  std::string s = "M" + pt(piece_start(pc));
  if (auto a = std::get_if<Arc>(&pc)) return s + arc_cmd(*a);
  return s + " L" + pt(std::get<Segment>(pc).end);
}

}  // namespace detail

struct SvgOptions {
  double size = 480;  // pixel width and height
  bool labels = true;
  std::string title;
};

// Both ring circles, the body as one filled path, and one stroked path per
// boundary piece tagged with its class.
inline std::string render_svg(const ConvexBody& body, double a, double b, const SvgOptions& opt = {}) {
  using detail::fx;
  const double m = 1.15 * b;
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fx(opt.size) + "\" height=\"" + fx(opt.size) +
         "\" viewBox=\"" + fx(-m) + " " + fx(-m) + " " + fx(2 * m) + " " + fx(2 * m) + "\">\n";
  if (!opt.title.empty()) out += "<title>" + opt.title + "</title>\n";
  const std::string sw = fx(b / 150);
  out += "<circle class=\"outer\" cx=\"0\" cy=\"0\" r=\"" + fx(b) + "\" fill=\"none\" stroke=\"#999999\" stroke-width=\"" +
         sw + "\" stroke-dasharray=\"" + fx(b / 40) + "\"/>\n";
  if (a > 0)
    out += "<circle class=\"inner\" cx=\"0\" cy=\"0\" r=\"" + fx(a) + "\" fill=\"none\" stroke=\"#999999\" stroke-width=\"" +
           sw + "\" stroke-dasharray=\"" + fx(b / 40) + "\"/>\n";

  const auto& pcs = body.pieces();
  std::string d;
  for (std::size_t i = 0; i < pcs.size(); ++i) {
    if (i == 0) d += "M" + detail::pt(piece_start(pcs[i]));
    if (auto arc = std::get_if<Arc>(&pcs[i])) d += detail::arc_cmd(*arc);
    else d += " L" + detail::pt(std::get<Segment>(pcs[i]).end);
  }
  d += " Z";
  out += "<path class=\"body\" d=\"" + d + "\" fill=\"#f4d03f\" fill-opacity=\"0.45\" stroke=\"none\"/>\n";

  for (auto const& pc : pcs) {
    PieceClass c = classify_piece(pc, a, b);
    out += "<path class=\"piece " + std::string(to_string(c)) + "\" d=\"" + detail::piece_path(pc) +
           "\" fill=\"none\" stroke=\"" + detail::class_color(c) + "\" stroke-width=\"" + fx(b / 80) + "\"/>\n";
  }
  if (opt.labels) {
    for (auto const& pc : pcs) {
      PieceClass c = classify_piece(pc, a, b);
      Point mid;
      if (auto arc = std::get_if<Arc>(&pc)) mid = arc->radius * unit(arc->angle_start + arc->angle_sweep / 2);
      else mid = 0.5 * (std::get<Segment>(pc).start + std::get<Segment>(pc).end);
      double r = norm(mid);
      Point at = r > 0 ? (1 + 0.06 * b / r) * mid : mid;
      out += "<text x=\"" + fx(at.x) + "\" y=\"" + fx(-at.y) + "\" font-size=\"" + fx(b / 14) +
             "\" text-anchor=\"middle\" fill=\"" + detail::class_color(c) + "\">" + to_string(c) + "</text>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace annulus
