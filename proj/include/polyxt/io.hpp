#pragma once

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "polyxt/admissibility.hpp"
#include "polyxt/builder.hpp"
#include "polyxt/errors.hpp"
#include "polyxt/extraction.hpp"
#include "polyxt/factorization.hpp"
#include "polyxt/geometry.hpp"
#include "polyxt/matrix.hpp"
#include "polyxt/nmf3.hpp"
#include "polyxt/rational.hpp"

namespace polyxt::io {

using Json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

namespace detail {

inline Json scalars(const std::vector<Scalar> &v) {
  Json a = Json::array();
  for (const auto &x : v)
    a.push_back(to_string(x));
  return a;
}

inline std::vector<Scalar> parse_scalars(const Json &a) {
  if (!a.is_array())
    fail(ErrorCode::ParseError, "expected an array of rationals");
  std::vector<Scalar> out;
  out.reserve(a.size());
  for (const auto &x : a) {
    if (!x.is_string())
      fail(ErrorCode::ParseError, "rationals are serialized as \"p/q\" strings");
    out.push_back(parse_scalar(x.get<std::string>()));
  }
  return out;
}

inline void check_version(const Json &j, const char *what) {
  if (!j.is_object() || !j.contains("format_version"))
    fail(ErrorCode::ParseError, std::string(what) + " JSON lacks format_version");
  if (j.at("format_version") != kFormatVersion)
    fail(ErrorCode::ParseError, std::string(what) + " JSON has an unsupported format_version");
}

template <class T> T field(const Json &j, const char *key) {
  if (!j.contains(key))
    fail(ErrorCode::ParseError, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception &e) {
    fail(ErrorCode::ParseError, std::string("field '") + key + "': " + e.what());
  }
}

inline Json mismatch(const std::optional<Mismatch> &m) {
  if (!m)
    return nullptr;
  return Json{{"row", m->row}, {"col", m->col}, {"expected", to_string(m->expected)}, {"actual", to_string(m->actual)}};
}

inline std::optional<Mismatch> parse_mismatch(const Json &j) {
  if (j.is_null())
    return std::nullopt;
  return Mismatch{field<std::size_t>(j, "row"), field<std::size_t>(j, "col"),
                  parse_scalar(field<std::string>(j, "expected")), parse_scalar(field<std::string>(j, "actual"))};
}

} // namespace detail

// ---- polygons

inline Json to_json(const VertexSequence &seq) {
  Json v = Json::array();
  for (const auto &p : seq)
    v.push_back(Json{{"x", to_string(p.x)}, {"y", to_string(p.y)}});
  return Json{{"format_version", kFormatVersion}, {"n", seq.size()}, {"vertices", v}};
}

inline VertexSequence polygon_from_json(const Json &j) {
  detail::check_version(j, "polygon");
  const auto &v = j.at("vertices");
  if (!v.is_array())
    fail(ErrorCode::ParseError, "vertices must be an array");
  std::vector<Point> pts;
  for (const auto &p : v) {
    if (!p.is_object() || !p.contains("x") || !p.contains("y"))
      fail(ErrorCode::ParseError, "each vertex is an object with rational strings x and y");
    pts.push_back({parse_scalar(p.at("x").get<std::string>()), parse_scalar(p.at("y").get<std::string>())});
  }
  if (j.contains("n") && j.at("n").get<std::size_t>() != pts.size())
    fail(ErrorCode::ParseError, "n does not match the number of vertices");
  return VertexSequence(std::move(pts));
}

// ---- factorizations

inline Json to_json(const Factorization &f) {
  Json terms = Json::array();
  for (const auto &t : f.terms)
    terms.push_back(Json{{"row", detail::scalars(t.row_factor)}, {"col", detail::scalars(t.col_factor)},
                         {"label", t.label}});
  return Json{{"format_version", kFormatVersion},
              {"rows", f.rows},
              {"cols", f.cols},
              {"inner_dim", f.inner_dim()},
              {"terms", terms}};
}

/// Terms with a zero factor are dropped on load, as everywhere else.
inline Factorization factorization_from_json(const Json &j) {
  detail::check_version(j, "factorization");
  Factorization f{detail::field<std::size_t>(j, "rows"), detail::field<std::size_t>(j, "cols"), {}};
  for (const auto &t : j.at("terms"))
    f.add({detail::parse_scalars(t.at("row")), detail::parse_scalars(t.at("col")),
           t.contains("label") ? t.at("label").get<std::string>() : std::string{}});
  return f;
}

inline Json to_json(const VerificationReport &r) {
  Json j{{"format_version", kFormatVersion},
         {"passed", r.passed},
         {"inner_dim", r.inner_dim},
         {"first_mismatch", detail::mismatch(r.first_mismatch)}};
  if (r.negative)
    j["negative"] = Json{{"term", r.negative->term},
                         {"factor", r.negative->in_row_factor ? "row" : "col"},
                         {"index", r.negative->index},
                         {"value", to_string(r.negative->value)}};
  else
    j["negative"] = nullptr;
  return j;
}

// ---- certificates

/// Timings are left out unless asked for, so that repeated runs produce
/// identical bytes.
inline Json to_json(const ExtensionCertificate &c, bool with_timings = false) {
  Json j{{"format_version", kFormatVersion},
         {"polygon_hash", c.polygon_hash},
         {"n", c.n},
         {"route", c.route},
         {"bound_formula", c.bound_formula},
         {"bound_value", c.bound_value},
         {"inner_dim", c.inner_dim},
         {"verdict", c.verdict},
         {"first_mismatch", detail::mismatch(c.first_mismatch)},
         {"notes", c.notes}};
  if (with_timings)
    j["seconds"] = c.seconds;
  return j;
}

inline ExtensionCertificate certificate_from_json(const Json &j) {
  detail::check_version(j, "certificate");
  ExtensionCertificate c;
  c.polygon_hash = detail::field<std::string>(j, "polygon_hash");
  c.n = detail::field<std::size_t>(j, "n");
  c.route = detail::field<std::string>(j, "route");
  c.bound_formula = detail::field<std::string>(j, "bound_formula");
  c.bound_value = detail::field<std::size_t>(j, "bound_value");
  c.inner_dim = detail::field<std::size_t>(j, "inner_dim");
  c.verdict = detail::field<bool>(j, "verdict");
  c.first_mismatch = detail::parse_mismatch(j.at("first_mismatch"));
  c.notes = detail::field<std::vector<std::string>>(j, "notes");
  if (j.contains("seconds"))
    c.seconds = j.at("seconds").get<double>();
  return c;
}

/// Certificate plus the factorization it certifies.
inline Json certificate_bundle(const ExtensionCertificate &c, const Factorization &f, bool with_timings = false) {
  Json j = to_json(c, with_timings);
  j["factorization"] = to_json(f);
  return j;
}

// ---- reports

inline Json to_json(const AdmissibilityReport &r) {
  Json j{{"format_version", kFormatVersion},
         {"admissible", r.admissible},
         {"checked_quadruples", r.checked_quadruples},
         {"mode", r.mode == CheckMode::Exhaustive ? "exhaustive" : "sampled"}};
  if (r.first_violation) {
    const auto &v = *r.first_violation;
    j["first_violation"] = Json{{"p", v.at.p},
                                {"q", v.at.q},
                                {"r", v.at.r},
                                {"t", v.at.t},
                                {"lhs", to_string(v.lhs)},
                                {"rhs", to_string(v.rhs)}};
  } else {
    j["first_violation"] = nullptr;
  }
  return j;
}

inline Json to_json(const SufficiencyReport &r) {
  return Json{{"format_version", kFormatVersion},
              {"thin", r.thin_ok},
              {"edges", r.edges_ok},
              {"angles", r.angle_ok},
              {"edge_by_angle", r.edge_by_angle_ok},
              {"all", r.all()},
              {"theta", to_string(r.theta)},
              {"h", to_string(r.h)},
              {"precision_used", r.precision_used},
              {"undecided", r.undecided}};
}

inline Json to_json(const ExtractionResult &r) {
  Json stages = Json::array();
  for (const auto &s : r.stage_reports)
    stages.push_back(Json{{"stage", s.stage}, {"outcome", s.outcome}, {"length", s.length}});
  Json idx = Json::array();
  for (auto i : r.indices)
    idx.push_back(i + 1);
  return Json{{"format_version", kFormatVersion},
              {"indices", idx},
              {"verified", r.verified},
              {"stages", stages},
              {"subsequence", to_json(r.subsequence)},
              {"admissibility", to_json(r.admissibility)}};
}

inline Json to_json(const NmfResult &r) {
  Json j = to_json(r.factorization);
  j["route"] = r.report.route;
  j["k"] = r.report.k;
  j["transposed"] = r.report.transposed;
  j["verified"] = r.report.verified;
  j["notes"] = r.report.notes;
  return j;
}

// ---- matrices (header line "rows,cols", then one row of "p/q" or integer cells per line)

inline std::string to_csv(const Matrix &m) {
  std::string out = std::to_string(m.rows()) + "," + std::to_string(m.cols()) + "\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j)
        out += ',';
      out += to_string(m(i, j));
    }
    out += '\n';
  }
  return out;
}

inline Matrix matrix_from_csv(const std::string &text) {
  std::vector<std::vector<Scalar>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
      line.pop_back();
    if (line.empty() || line[0] == '#')
      continue;
    std::vector<Scalar> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      const auto b = cell.find_first_not_of(' ');
      const auto e = cell.find_last_not_of(' ');
      if (b == std::string::npos)
        fail(ErrorCode::ParseError, "empty CSV cell");
      row.push_back(parse_scalar(std::string_view(cell).substr(b, e - b + 1)));
    }
    if (rows.size() > 1 && row.size() != rows[1].size())
      fail(ErrorCode::ParseError, "ragged CSV matrix");
    rows.push_back(std::move(row));
  }
  if (rows.empty())
    fail(ErrorCode::ParseError, "empty CSV matrix");
  const auto &head = rows.front();
  const auto dim = [](const Scalar &x) -> std::size_t {
    if (x.get_den() != 1 || sgn(x) <= 0 || !x.get_num().fits_ulong_p())
      fail(ErrorCode::ParseError, "CSV header must be two positive integers rows,cols");
    return x.get_num().get_ui();
  };
  if (head.size() != 2)
    fail(ErrorCode::ParseError, "CSV header must be two positive integers rows,cols");
  const std::size_t r = dim(head[0]), c = dim(head[1]);
  if (rows.size() - 1 != r || (r > 0 && rows[1].size() != c))
    fail(ErrorCode::ParseError, "CSV body does not match the header " + std::to_string(r) + "," + std::to_string(c));
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      m(i, j) = std::move(rows[i + 1][j]);
  return m;
}

// ---- files

inline std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    fail(ErrorCode::IoError, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    fail(ErrorCode::IoError, "cannot write '" + path + "'");
  out << content;
  if (!out)
    fail(ErrorCode::IoError, "write to '" + path + "' failed");
}

inline Json parse_json(const std::string &text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    fail(ErrorCode::ParseError, e.what());
  }
}

inline std::string dump(const Json &j) { return j.dump(2) + "\n"; }

// ---- SVG

struct PlotAnnotations {
  std::vector<Chunk> chunks;
  /// 0-based vertex indices drawn as highlighted dots.
  std::vector<std::size_t> highlights;
  std::string title;
};

/// Static SVG of a proper polygon: outline, one colored polyline per chunk
/// (class "chunk"), highlighted vertices (class "highlight"). Coordinates are
/// rounded to 3 decimals after fitting into an 800x800 box.
inline std::string plot_svg(const VertexSequence &seq, const PlotAnnotations &ann = {}) {
  require_proper(seq);
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  std::vector<std::pair<double, double>> pts;
  for (const auto &p : seq) {
    const double x = p.x.get_d(), y = p.y.get_d();
    if (pts.empty()) {
      xmin = xmax = x;
      ymin = ymax = y;
    }
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
    pts.emplace_back(x, y);
  }
  const double size = 800, pad = 20;
  const double span = std::max({xmax - xmin, ymax - ymin, 1e-300});
  const double scale = (size - 2 * pad) / span;
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return std::string(buf);
  };
  auto at = [&](std::size_t i) {
    const double x = pad + (pts[i].first - xmin) * scale;
    const double y = size - pad - (pts[i].second - ymin) * scale; // SVG y points down
    return fmt(x) + "," + fmt(y);
  };
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\"0 0 800 800\">\n";
  if (!ann.title.empty())
    s << "  <title>" << ann.title << "</title>\n";
  s << "  <polygon class=\"outline\" fill=\"#f4f4f4\" stroke=\"#222\" stroke-width=\"1\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i)
    s << (i ? " " : "") << at(i);
  s << "\"/>\n";
  static const char *palette[] = {"#d1495b", "#00798c", "#edae49", "#30638e", "#66a182", "#8d96a3"};
  for (std::size_t c = 0; c < ann.chunks.size(); ++c) {
    const auto &ch = ann.chunks[c];
    s << "  <polyline class=\"chunk\" fill=\"none\" stroke=\"" << palette[c % 6] << "\" stroke-width=\"3\" points=\"";
    for (std::size_t a = 0; a < ch.count; ++a)
      s << (a ? " " : "") << at((ch.first + a) % pts.size());
    if (ch.count == pts.size())
      s << " " << at(ch.first);
    s << "\"/>\n";
  }
  auto dot = [&](const char *cls, const char *r, const char *fill, std::size_t i) {
    const std::string a = at(i);
    s << "  <circle class=\"" << cls << "\" r=\"" << r << "\" fill=\"" << fill << "\" cx=\"" << a.substr(0, a.find(','))
      << "\" cy=\"" << a.substr(a.find(',') + 1) << "\"/>\n";
  };
  for (std::size_t i = 0; i < pts.size(); ++i)
    dot("vertex", "1.5", "#222", i);
  for (auto i : ann.highlights) {
    if (i >= pts.size())
      fail(ErrorCode::InvalidArgument, "highlight index out of range");
    dot("highlight", "4", "#d1495b", i);
  }
  s << "</svg>\n";
  return s.str();
}

} // namespace polyxt::io
