#pragma once

#include <json.hpp>

#include "annulus/geometry.hpp"

namespace annulus {

// {"pieces": [{"segment": {"start": [x, y], "end": [x, y]}}
//           | {"arc": {"radius": r, "angle_start": t, "angle_sweep": s}}],
//  "degenerate": bool}
// Doubles are written with round-trip precision (17 significant digits).
inline nlohmann::json body_to_json(const ConvexBody& body) {
  nlohmann::json pieces = nlohmann::json::array();
  for (auto const& pc : body.pieces()) {
    if (auto s = std::get_if<Segment>(&pc)) {
      pieces.push_back({{"segment", {{"start", {s->start.x, s->start.y}}, {"end", {s->end.x, s->end.y}}}}});
    } else {
      const auto& a = std::get<Arc>(pc);
      pieces.push_back({{"arc", {{"radius", a.radius}, {"angle_start", a.angle_start}, {"angle_sweep", a.angle_sweep}}}});
    }
  }
  return {{"pieces", pieces}, {"degenerate", body.degenerate()}};
}

inline ConvexBody body_from_json(const nlohmann::json& j) {
  try {
    std::vector<BoundaryPiece> pcs;
    for (auto const& e : j.at("pieces")) {
      if (e.contains("segment")) {
        auto const& s = e.at("segment");
        pcs.emplace_back(Segment{{s.at("start").at(0).get<double>(), s.at("start").at(1).get<double>()},
                                 {s.at("end").at(0).get<double>(), s.at("end").at(1).get<double>()}});
      } else {
        auto const& a = e.at("arc");
        pcs.emplace_back(Arc{a.at("radius").get<double>(), a.at("angle_start").get<double>(),
                             a.at("angle_sweep").get<double>()});
      }
    }
    return ConvexBody::from_pieces(std::move(pcs), j.value("degenerate", false));
  } catch (const nlohmann::json::exception& e) {
    throw GeometryError(std::string("malformed body JSON: ") + e.what());
  }
}

}  // namespace annulus
