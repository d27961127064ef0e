#pragma once

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "invariants.hpp"
#include "normalizer.hpp"
#include "symbol.hpp"

namespace farey {

using json = nlohmann::ordered_json;

// --- symbols -------------------------------------------------------------------

/// Integers that fit in 64 bits become JSON numbers, larger ones strings.
inline json int_json(const Int& x) {
  if (x.fits_slong_p()) return x.get_si();
  return x.get_str();
}

inline json matrix_json(const IMat& m) {
  return json::array({int_json(m.a), int_json(m.b), int_json(m.c), int_json(m.d)});
}

inline json to_json(const ExtendedFareySymbol& f) {
  json out;
  out["vertices"] = json::array();
  for (const Cusp& v : f.vertices()) out["vertices"].push_back(v.str());
  out["pairing"] = f.pairing();
  out["ell"] = json::object();
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.ell_order(i)) out["ell"][std::to_string(i)] = f.ell_order(i);
  }
  if (f.level()) out["level"] = *f.level();
  return out;
}

/// Reads the interchange object. Shape errors throw parse; the result is not
/// validated.
inline ExtendedFareySymbol symbol_from_json(const json& j) {
  auto fail = [](const std::string& msg) -> void { throw Error(ErrorKind::Parse, msg); };
  if (!j.is_object()) fail("symbol must be a JSON object");
  if (!j.contains("vertices") || !j["vertices"].is_array()) fail("missing array 'vertices'");
  if (!j.contains("pairing") || !j["pairing"].is_array()) fail("missing array 'pairing'");
  const std::size_t n = j["vertices"].size();
  std::vector<Cusp> vertices;
  for (const auto& v : j["vertices"]) {
    if (!v.is_string()) fail("vertices must be strings \"p/q\"");
    vertices.push_back(Cusp::parse(v.get<std::string>()));
  }
  if (j["pairing"].size() != n) fail("'pairing' and 'vertices' differ in length");
  std::vector<std::size_t> pairing;
  for (const auto& p : j["pairing"]) {
    if (!p.is_number_unsigned()) fail("pairing entries must be non-negative integers");
    pairing.push_back(p.get<std::size_t>());
  }
  std::vector<int> ell(n, 0);
  if (j.contains("ell")) {
    if (!j["ell"].is_object()) fail("'ell' must be an object");
    for (const auto& [k, v] : j["ell"].items()) {
      std::size_t i = 0;
      try {
        std::size_t used = 0;
        i = std::stoul(k, &used);
        if (used != k.size()) throw std::invalid_argument(k);
      } catch (const std::exception&) {
        fail("bad 'ell' key '" + k + "'");
      }
      if (i >= n) fail("'ell' key out of range: " + k);
      if (!v.is_number_integer()) fail("'ell' values must be 2 or 3");
      ell[i] = v.get<int>();
    }
  }
  std::optional<long long> level;
  if (j.contains("level") && !j["level"].is_null()) {
    if (!j["level"].is_number_integer()) fail("'level' must be an integer");
    level = j["level"].get<long long>();
  }
  return ExtendedFareySymbol(std::move(vertices), std::move(pairing), std::move(ell), level);
}

inline std::string serialize(const ExtendedFareySymbol& f, int indent = -1) {
  return to_json(f).dump(indent);
}

inline ExtendedFareySymbol parse_symbol(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Parse, e.what());
  }
  return symbol_from_json(j);
}

// --- reports -------------------------------------------------------------------

inline json word_json(const Word& w) {
  json out = json::array();
  for (const Letter& l : w) out.push_back(json::array({l.arc, l.exponent}));
  return out;
}

inline json counts_json(const Counts& c) {
  return {{"genus", c.genus}, {"cusps", c.cusps}, {"nu2", c.nu2}, {"nu3", c.nu3},
          {"index", c.index}};
}

inline json cusps_json(const ExtendedFareySymbol& f) {
  json out = json::array();
  for (const CuspClass& c : cusp_orbits(f)) {
    out.push_back({{"representative", c.representative.str()},
                   {"vertices", c.vertices},
                   {"width", int_json(c.width)},
                   {"stabilizer", word_json(c.stabilizer)}});
  }
  return out;
}

inline json generators_json(const ExtendedFareySymbol& f) {
  const GeneratorSystem gs = generators(f);
  json list = json::array();
  for (const Generator& g : gs.generators) {
    list.push_back({{"arc", g.arc}, {"class", to_string(g.kind)}, {"matrix", matrix_json(g.matrix)}});
  }
  json pairs = json::array();
  for (const auto& [a, b] : gs.symplectic) pairs.push_back(json::array({a, b}));
  return {{"generators", list}, {"symplectic", pairs}};
}

inline json ring_json(const GroupRingElement& x) {
  json out = json::array();
  for (const auto& [c, g] : x.terms()) {
    out.push_back({{"coefficient", int_json(c)}, {"matrix", matrix_json(g)}});
  }
  return out;
}

inline json presentation_json(const ExtendedFareySymbol& f) {
  const Delta0Presentation p = delta0_presentation(f);
  json gens = json::array();
  for (std::size_t k = 0; k < p.generators.size(); ++k) {
    gens.push_back({{"arc", p.generators[k]}, {"lambda", ring_json(p.lambda[k])}});
  }
  json mu = json::array();
  for (const auto& [a, m] : p.mu) mu.push_back({{"arc", a}, {"mu", ring_json(m)}});
  return {{"generators", gens}, {"mu", mu}};
}

inline json info_json(const ExtendedFareySymbol& f) {
  return {{"size", f.size()},
          {"counts", counts_json(counts(f))},
          {"cusps", cusps_json(f)},
          {"generators", generators_json(f)}};
}

inline json step_json(const StepInfo& s) {
  return {{"kind", to_string(s.kind)},
          {"pivots", s.pivots},
          {"w_before", s.w_before},
          {"w_len", s.w_after},
          {"cuts", s.cuts}};
}

// --- SVG -----------------------------------------------------------------------

enum class RenderStyle { Chords, Halfplane, Disk };

inline RenderStyle parse_style(const std::string& s) {
  if (s == "chords") return RenderStyle::Chords;
  if (s == "halfplane") return RenderStyle::Halfplane;
  if (s == "disk") return RenderStyle::Disk;
  throw Error(ErrorKind::InvalidInput, "unknown style '" + s + "'");
}

struct RenderSpec {
  RenderStyle style = RenderStyle::Chords;
  int width = 600;
  int height = 600;
  double x_min = -1.5;  ///< halfplane only
  double x_max = 1.5;
  std::string stroke = "black";
  std::string fill = "none";
  double stroke_width = 1.0;

  void check() const {
    if (width <= 0 || height <= 0) throw Error(ErrorKind::InvalidInput, "dimensions must be positive");
    if (!(x_min < x_max)) throw Error(ErrorKind::InvalidInput, "empty x-range");
  }
};

/// Point of the upper half plane with rational x and y^2.
struct HalfPlanePoint {
  mpq_class x;
  mpq_class y2;
};

/// Fixed point of an elliptic matrix in the upper half plane:
/// x = (a - d) / 2c, y^2 = (4 - t^2) / 4c^2.
inline HalfPlanePoint elliptic_fixed_point(const IMat& g) {
  if (sgn(g.c) == 0) throw Error(ErrorKind::InvalidInput, "not elliptic: " + g.str());
  const Int t = g.a + g.d;
  const Int c2 = 4 * g.c * g.c;
  HalfPlanePoint p{mpq_class(g.a - g.d, 2 * g.c), mpq_class(4 - t * t, c2)};
  p.x.canonicalize();
  p.y2.canonicalize();
  if (sgn(p.y2) <= 0) throw Error(ErrorKind::InvalidInput, "not elliptic: " + g.str());
  return p;
}

/// Centre of the geodesic circle through the real point r and p:
/// (c - r)^2 = (c - x)^2 + y^2.
inline mpq_class geodesic_centre(const mpq_class& r, const HalfPlanePoint& p) {
  mpq_class c = (p.x * p.x + p.y2 - r * r) / (2 * (p.x - r));
  c.canonicalize();
  return c;
}

namespace detail {

inline std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s = buf;
  return s == "-0.00" ? "0.00" : s;
}

inline double to_double(const Cusp& c) { return mpq_class(c.num(), c.den()).get_d(); }

inline std::string header(const RenderSpec& spec) {
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << spec.width
     << "\" height=\"" << spec.height << "\" viewBox=\"0 0 " << spec.width << " " << spec.height
     << "\">\n";
  return os.str();
}

struct Pt {
  double x, y;
};

/// SVG arc (or line) through a, m, b, with m between a and b.
inline std::string arc_through(Pt a, Pt m, Pt b) {
  const double d = 2 * (a.x * (m.y - b.y) + m.x * (b.y - a.y) + b.x * (a.y - m.y));
  std::ostringstream os;
  os << "M " << fmt(a.x) << " " << fmt(a.y) << " ";
  const double span = std::hypot(b.x - a.x, b.y - a.y);
  if (std::abs(d) < 1e-9 * (1 + span * span)) {
    os << "L " << fmt(b.x) << " " << fmt(b.y);
    return os.str();
  }
  const double a2 = a.x * a.x + a.y * a.y, m2 = m.x * m.x + m.y * m.y, b2 = b.x * b.x + b.y * b.y;
  const double ux = (a2 * (m.y - b.y) + m2 * (b.y - a.y) + b2 * (a.y - m.y)) / d;
  const double uy = (a2 * (b.x - m.x) + m2 * (a.x - b.x) + b2 * (m.x - a.x)) / d;
  const double r = std::hypot(a.x - ux, a.y - uy);
  const double turn = (m.x - a.x) * (b.y - a.y) - (m.y - a.y) * (b.x - a.x);
  const int sweep = turn > 0 ? 1 : 0;
  const int large = 0;
  os << "A " << fmt(r) << " " << fmt(r) << " 0 " << large << " " << sweep << " " << fmt(b.x) << " "
     << fmt(b.y);
  return os.str();
}

/// Points of the upper half plane in floating point; y = +inf marks oo.
struct HP {
  double x, y;
};

inline HP to_hp(const Cusp& c) {
  if (c.is_infinity()) return {0, INFINITY};
  return {to_double(c), 0};
}

inline HP to_hp(const HalfPlanePoint& p) { return {p.x.get_d(), std::sqrt(p.y2.get_d())}; }

/// Top of the geodesic between two points, used as the middle point of arcs.
struct Segment {
  HP from, mid, to;
};

/// Segment between a cusp and either a cusp or an interior point, with an
/// exactly placed middle point.
inline Segment segment(const Cusp& r, const Cusp& s) {
  if (r.is_infinity() || s.is_infinity()) {
    const double x = to_double(r.is_infinity() ? s : r);
    return {to_hp(r), {x, 1.0}, to_hp(s)};
  }
  const double a = to_double(r), b = to_double(s);
  return {to_hp(r), {(a + b) / 2, std::abs(b - a) / 2}, to_hp(s)};
}

inline Segment segment(const Cusp& r, const HalfPlanePoint& p, bool reverse) {
  HP mid;
  if (r.is_infinity()) {
    const HP q = to_hp(p);
    mid = {q.x, q.y * 2};
  } else if (mpq_class(r.num(), r.den()) == p.x) {
    const HP q = to_hp(p);
    mid = {q.x, q.y / 2};
  } else {
    const mpq_class rq(r.num(), r.den());
    const double c = geodesic_centre(rq, p).get_d();
    const double rad = std::abs(rq.get_d() - c);
    const double t0 = std::atan2(0.0, rq.get_d() - c);
    const HP q = to_hp(p);
    const double t1 = std::atan2(q.y, q.x - c);
    const double t = (t0 + t1) / 2;
    mid = {c + rad * std::cos(t), rad * std::sin(t)};
  }
  Segment s{to_hp(r), mid, to_hp(p)};
  if (reverse) std::swap(s.from, s.to);
  return s;
}

}  // namespace detail

/// Chord diagram of the pairing: arcs as points on a circle, one chord per
/// pair, filled dots for order 3 and hollow dots for order 2.
inline std::string render_chords(const ExtendedFareySymbol& f, const RenderSpec& spec = {}) {
  spec.check();
  const std::size_t n = f.size();
  const double cx = spec.width / 2.0, cy = spec.height / 2.0;
  const double radius = 0.4 * std::min(spec.width, spec.height);
  std::vector<detail::Pt> pos(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = M_PI / 2 - 2 * M_PI * static_cast<double>(i) / static_cast<double>(n);
    pos[i] = {cx + radius * std::cos(t), cy - radius * std::sin(t)};
  }
  std::ostringstream os;
  os << detail::header(spec);
  os << "<circle class=\"frame\" cx=\"" << detail::fmt(cx) << "\" cy=\"" << detail::fmt(cy)
     << "\" r=\"" << detail::fmt(radius) << "\" fill=\"" << spec.fill << "\" stroke=\"lightgray\"/>\n";
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = f.partner(i);
    if (j <= i) continue;
    os << "<line class=\"chord\" x1=\"" << detail::fmt(pos[i].x) << "\" y1=\"" << detail::fmt(pos[i].y)
       << "\" x2=\"" << detail::fmt(pos[j].x) << "\" y2=\"" << detail::fmt(pos[j].y) << "\" stroke=\""
       << spec.stroke << "\" stroke-width=\"" << detail::fmt(spec.stroke_width) << "\"/>\n";
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::string p = "cx=\"" + detail::fmt(pos[i].x) + "\" cy=\"" + detail::fmt(pos[i].y) + "\"";
    os << "<circle class=\"point\" " << p << " r=\"2.00\" fill=\"" << spec.stroke << "\"/>\n";
    if (f.ell_order(i) == 3) {
      os << "<circle class=\"ell3\" " << p << " r=\"6.00\" fill=\"" << spec.stroke << "\"/>\n";
    } else if (f.ell_order(i) == 2) {
      os << "<circle class=\"ell2\" " << p << " r=\"6.00\" fill=\"white\" stroke=\"" << spec.stroke
         << "\"/>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

/// Boundary of the fundamental domain: geodesic sides, with each elliptic
/// arc split at the fixed point of its gluing matrix.
inline std::string render_polygon(const ExtendedFareySymbol& f, const RenderSpec& spec = {}) {
  spec.check();
  if (spec.style == RenderStyle::Chords) return render_chords(f, spec);
  const bool disk = spec.style == RenderStyle::Disk;
  const double w = spec.width, h = spec.height;
  const double scale = w / (spec.x_max - spec.x_min);
  const double base = h - 10;
  const double disk_r = 0.45 * std::min(w, h);

  auto place = [&](detail::HP p) -> detail::Pt {
    if (!disk) {
      const double y = std::isinf(p.y) ? 0.0 : base - p.y * scale;
      return {(p.x - spec.x_min) * scale, std::max(0.0, y)};
    }
    // Cayley transform (z - i) / (z + i)
    double u, v;
    if (std::isinf(p.y)) {
      u = 1;
      v = 0;
    } else {
      const double den = p.x * p.x + (p.y + 1) * (p.y + 1);
      u = (p.x * p.x + p.y * p.y - 1) / den;
      v = -2 * p.x / den;
    }
    return {w / 2 + disk_r * u, h / 2 - disk_r * v};
  };

  auto path = [&](const detail::Segment& s, const char* cls) {
    std::ostringstream os;
    detail::Pt a = place(s.from), m = place(s.mid), b = place(s.to);
    os << "<path class=\"" << cls << "\" d=\"";
    if (!disk && (std::isinf(s.from.y) || std::isinf(s.to.y))) {
      if (std::isinf(s.from.y)) a.x = m.x;
      if (std::isinf(s.to.y)) b.x = m.x;
      os << "M " << detail::fmt(a.x) << " " << detail::fmt(a.y) << " L " << detail::fmt(b.x) << " "
         << detail::fmt(b.y);
    } else {
      os << detail::arc_through(a, m, b);
    }
    os << "\" fill=\"none\" stroke=\"" << spec.stroke << "\" stroke-width=\""
       << detail::fmt(spec.stroke_width) << "\"/>\n";
    return os.str();
  };

  std::ostringstream os;
  os << detail::header(spec);
  if (disk) {
    os << "<circle class=\"frame\" cx=\"" << detail::fmt(w / 2) << "\" cy=\"" << detail::fmt(h / 2)
       << "\" r=\"" << detail::fmt(disk_r) << "\" fill=\"" << spec.fill
       << "\" stroke=\"lightgray\"/>\n";
  } else {
    os << "<line class=\"frame\" x1=\"0.00\" y1=\"" << detail::fmt(base) << "\" x2=\"" << detail::fmt(w)
       << "\" y2=\"" << detail::fmt(base) << "\" stroke=\"lightgray\"/>\n";
  }
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Cusp& r = f.vertex(i);
    const Cusp& s = f.vertex(i + 1);
    if (!f.is_fixed(i)) {
      os << path(detail::segment(r, s), "geodesic");
      continue;
    }
    const HalfPlanePoint t = elliptic_fixed_point(f.gluing(i));
    os << path(detail::segment(r, t, false), "geodesic");
    os << path(detail::segment(s, t, true), "geodesic");
    const detail::Pt q = place(detail::to_hp(t));
    const bool filled = f.ell_order(i) == 3;
    os << "<circle class=\"" << (filled ? "ell3" : "ell2") << "\" cx=\"" << detail::fmt(q.x)
       << "\" cy=\"" << detail::fmt(q.y) << "\" r=\"3.00\" fill=\""
       << (filled ? spec.stroke : std::string("white")) << "\" stroke=\"" << spec.stroke << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

inline std::string render(const ExtendedFareySymbol& f, const RenderSpec& spec) {
  return spec.style == RenderStyle::Chords ? render_chords(f, spec) : render_polygon(f, spec);
}

}  // namespace farey
