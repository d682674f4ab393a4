#include "gilbert/io.hpp"

#include "gilbert/error.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace gilbert::io {

namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr const char* kTableHeader = "lambda,estimate,std_error,target,n_rep,certified_fraction,master_seed";

std::string svg_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v == 0.0 ? 0.0 : v);
  return buf;
}

json length_json(ExtLength l) {
  if (l.is_infinite()) return "inf";
  return l.finite_value();
}

json branch_json(const BranchId& b) {
  return {{"seed", b.seed}, {"sign", std::string(1, sign_char(b.sign))}};
}

// Largest s >= 0 with origin + s * dir in the window, 0 if the ray misses.
double ray_exit(const Window& window, Vec2 origin, Vec2 dir) {
  if (const Rect* r = window.rect()) {
    double lo = 0.0, hi = kInf;
    const double o[2] = {origin.x, origin.y};
    const double d[2] = {dir.x, dir.y};
    const double a[2] = {r->x0, r->y0};
    const double b[2] = {r->x0 + r->w, r->y0 + r->h};
    for (int k = 0; k < 2; ++k) {
      if (d[k] == 0.0) {
        if (o[k] < a[k] || o[k] > b[k]) return 0.0;
        continue;
      }
      double t0 = (a[k] - o[k]) / d[k];
      double t1 = (b[k] - o[k]) / d[k];
      if (t0 > t1) std::swap(t0, t1);
      lo = std::max(lo, t0);
      hi = std::min(hi, t1);
    }
    return lo <= hi ? hi : 0.0;
  }
  const Ball& ball = *window.ball();
  const Vec2 w = origin - ball.center;
  const double bq = dot(w, dir);
  const double disc = bq * bq - (dot(w, w) - ball.r * ball.r);
  if (disc < 0.0) return 0.0;
  return std::max(0.0, -bq + std::sqrt(disc));
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(std::string_view text) {
  const std::string s(text);
  if (s == "inf") return kInf;
  if (s == "-inf") return -kInf;
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw IoError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw IoError("not a number: '" + s + "'");
  return v;
}

std::string tessellation_json(const Tessellation& tess) {
  json seeds = json::array();
  for (std::size_t i = 0; i < tess.seed_count(); ++i) {
    const MarkedPoint& p = tess.config().points[i];
    json s = {{"id", p.id}, {"x", p.position.x}, {"y", p.position.y}, {"alpha", p.mark}};
    for (Sign sign : {Sign::Plus, Sign::Minus}) {
      const std::string key = sign == Sign::Plus ? "plus" : "minus";
      s["xi_" + key] = length_json(tess.length_at(i, sign));
      const auto blocker = tess.blocker_of(p.id, sign);
      s["blocker_" + key] = blocker ? branch_json(*blocker) : json(nullptr);
    }
    seeds.push_back(std::move(s));
  }
  json events = json::array();
  for (const CollisionEvent& e : tess.events()) {
    events.push_back({{"time", e.time},
                      {"blocked", branch_json(e.blocked)},
                      {"blocker", branch_json(e.blocker)},
                      {"blocker_arrival", e.blocker_arrival},
                      {"x", e.point.x},
                      {"y", e.point.y}});
  }
  json out = {{"seeds", std::move(seeds)}, {"events", std::move(events)}};
  if (const auto& w = tess.config().window) out["window"] = {w->x0, w->y0, w->w, w->h};
  return out.dump(2) + "\n";
}

MarkedConfig config_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw IoError(std::string("seed file is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw DomainError("seed file must be a JSON list of {x, y, alpha}");
  MarkedConfig config;
  SeedId id = 0;
  for (const json& item : doc) {
    if (!item.is_object() || !item.contains("x") || !item.contains("y") || !item.contains("alpha") ||
        !item["x"].is_number() || !item["y"].is_number() || !item["alpha"].is_number()) {
      throw DomainError("seed entry " + std::to_string(id) + " needs numeric x, y and alpha");
    }
    config.points.push_back({{item["x"].get<double>(), item["y"].get<double>()}, item["alpha"].get<double>(), id++});
  }
  validate_config(config);
  return config;
}

std::string config_to_json(const MarkedConfig& config) {
  json out = json::array();
  for (const MarkedPoint& p : config.points) out.push_back({{"x", p.position.x}, {"y", p.position.y}, {"alpha", p.mark}});
  return out.dump(2) + "\n";
}

std::string render_svg(const Tessellation& tess, const Window& window) {
  const Rect box = window.bounding_rect();
  const double extent = std::max(box.w, box.h) > 0.0 ? std::max(box.w, box.h) : 1.0;
  const double stroke = 0.004 * extent;
  const double dot_r = 0.008 * extent;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << svg_number(box.x0) << ' '
      << svg_number(-(box.y0 + box.h)) << ' ' << svg_number(box.w) << ' ' << svg_number(box.h) << "\">\n";
  svg << "<g transform=\"matrix(1 0 0 -1 0 0)\">\n";
  if (const Rect* r = window.rect()) {
    svg << "<rect class=\"window\" x=\"" << svg_number(r->x0) << "\" y=\"" << svg_number(r->y0) << "\" width=\""
        << svg_number(r->w) << "\" height=\"" << svg_number(r->h) << "\" fill=\"none\" stroke=\"#999\" stroke-width=\""
        << svg_number(stroke) << "\"/>\n";
  } else {
    const Ball& b = *window.ball();
    svg << "<circle class=\"window\" cx=\"" << svg_number(b.center.x) << "\" cy=\"" << svg_number(b.center.y)
        << "\" r=\"" << svg_number(b.r) << "\" fill=\"none\" stroke=\"#999\" stroke-width=\"" << svg_number(stroke)
        << "\"/>\n";
  }
  for (std::size_t i = 0; i < tess.seed_count(); ++i) {
    const MarkedPoint& p = tess.config().points[i];
    for (Sign sign : {Sign::Plus, Sign::Minus}) {
      const Ray ray = branch_ray(p, sign);
      const ExtLength len = tess.length_at(i, sign);
      const double s = len.is_finite() ? len.finite_value() : ray_exit(window, ray.origin, ray.direction);
      const Vec2 end = ray.origin + s * ray.direction;
      svg << "<path class=\"branch\" data-seed=\"" << p.id << "\" data-sign=\"" << sign_char(sign) << "\" d=\"M "
          << svg_number(ray.origin.x) << ' ' << svg_number(ray.origin.y) << " L " << svg_number(end.x) << ' '
          << svg_number(end.y) << "\" stroke=\"#000\" stroke-width=\"" << svg_number(stroke) << "\""
          << (len.is_finite() ? "" : " stroke-dasharray=\"" + svg_number(4 * stroke) + "\"") << "/>\n";
    }
  }
  for (const MarkedPoint& p : tess.config().points) {
    svg << "<circle class=\"seed\" cx=\"" << svg_number(p.position.x) << "\" cy=\"" << svg_number(p.position.y)
        << "\" r=\"" << svg_number(dot_r) << "\" fill=\"#c00\"/>\n";
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

std::string table_csv(const stats::Table& table) {
  std::string out = std::string(kTableHeader) + "\n";
  for (const stats::TableRow& r : table.rows) {
    out += format_double(r.lambda) + ',' + format_double(r.estimate) + ',' + format_double(r.std_error) + ',' +
           format_double(r.target) + ',' + std::to_string(r.n_rep) + ',' + format_double(r.certified_fraction) + ',' +
           std::to_string(r.master_seed) + "\n";
  }
  return out;
}

stats::Table table_from_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kTableHeader) throw IoError("unexpected table header");
  stats::Table table;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells.size() != 7) throw IoError("table row needs 7 columns: '" + line + "'");
    stats::TableRow r;
    r.lambda = parse_double(cells[0]);
    r.estimate = parse_double(cells[1]);
    r.std_error = parse_double(cells[2]);
    r.target = parse_double(cells[3]);
    try {
      r.n_rep = std::stoull(cells[4]);
      r.master_seed = std::stoull(cells[6]);
    } catch (const std::exception&) {
      throw IoError("bad integer column in '" + line + "'");
    }
    r.certified_fraction = parse_double(cells[5]);
    table.rows.push_back(r);
  }
  return table;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace gilbert::io
