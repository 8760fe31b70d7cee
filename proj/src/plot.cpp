// Copyright 2026 The DRF Critic Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "drf_critic/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace drf {

std::vector<Segment> contour(const Grid& grid, double level) {
  const GridGeometry& g = grid.geometry();
  std::vector<Segment> out;
  auto lerp = [&](Vec2 p, Vec2 q, double vp, double vq) {
    const double f = (level - vp) / (vq - vp);
    return Vec2{p.x + f * (q.x - p.x), p.y + f * (q.y - p.y)};
  };
  for (int j = 0; j + 1 < g.height; ++j) {
    for (int i = 0; i + 1 < g.width; ++i) {
      // Corners counter-clockwise from bottom-left.
      const std::array<Vec2, 4> p{Vec2{g.cell_x(i), g.cell_y(j)}, Vec2{g.cell_x(i + 1), g.cell_y(j)},
                                  Vec2{g.cell_x(i + 1), g.cell_y(j + 1)},
                                  Vec2{g.cell_x(i), g.cell_y(j + 1)}};
      const std::array<double, 4> v{grid.at(i, j), grid.at(i + 1, j), grid.at(i + 1, j + 1),
                                    grid.at(i, j + 1)};
      int code = 0;
      for (int k = 0; k < 4; ++k) code |= (v[k] >= level ? 1 : 0) << k;
      if (code == 0 || code == 15) continue;
      auto edge = [&](int e) { return lerp(p[e], p[(e + 1) % 4], v[e], v[(e + 1) % 4]); };
      std::vector<int> crossing;
      for (int e = 0; e < 4; ++e) {
        if (((code >> e) & 1) != ((code >> ((e + 1) % 4)) & 1)) crossing.push_back(e);
      }
      if (crossing.size() == 2) {
        out.push_back({edge(crossing[0]), edge(crossing[1])});
      } else {
        // Saddle: pair edges around the corners that agree with the centre value.
        const double centre = 0.25 * (v[0] + v[1] + v[2] + v[3]);
        const bool high = centre >= level;
        const bool c0 = v[0] >= level;
        if (c0 == high) {
          out.push_back({edge(0), edge(1)});
          out.push_back({edge(2), edge(3)});
        } else {
          out.push_back({edge(3), edge(0)});
          out.push_back({edge(1), edge(2)});
        }
      }
    }
  }
  return out;
}

namespace {

struct View {
  double xmin, ymin, xmax, ymax;
  double sx(double x) const { return x - xmin; }
  double sy(double y) const { return ymax - y; }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

void rect(std::ostream& out, const View& view, const Pose2& pose, double length, double width,
          const char* fill) {
  const double c = std::cos(pose.heading);
  const double s = std::sin(pose.heading);
  const double lx[4] = {0.5 * length, -0.5 * length, -0.5 * length, 0.5 * length};
  const double ly[4] = {0.5 * width, 0.5 * width, -0.5 * width, -0.5 * width};
  out << "<polygon fill=\"" << fill << "\" stroke=\"black\" stroke-width=\"0.1\" points=\"";
  for (int k = 0; k < 4; ++k) {
    out << num(view.sx(pose.x + c * lx[k] - s * ly[k])) << ','
        << num(view.sy(pose.y + s * lx[k] + c * ly[k])) << (k < 3 ? " " : "");
  }
  out << "\"/>\n";
}

}  // namespace

void write_svg_frame(std::ostream& out, const Scenario& scenario, const RolloutLog& log,
                     std::size_t step, const SimOptions& options) {
  require(step < log.steps.size(), "frame index outside the log");
  const StepRecord& rec = log.steps[step];

  View view{INFINITY, INFINITY, -INFINITY, -INFINITY};
  for (const StepRecord& s : log.steps) {
    auto grow = [&](const Pose2& p) {
      view.xmin = std::min(view.xmin, p.x);
      view.ymin = std::min(view.ymin, p.y);
      view.xmax = std::max(view.xmax, p.x);
      view.ymax = std::max(view.ymax, p.y);
    };
    grow(s.ego.pose);
    for (const VehicleRecord& a : s.agents) grow(a.pose);
  }
  constexpr double kMargin = 20.0;
  view.xmin -= kMargin;
  view.ymin -= kMargin;
  view.xmax += kMargin;
  view.ymax += kMargin;

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 "
      << num(view.xmax - view.xmin) << ' ' << num(view.ymax - view.ymin) << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"#dddddd\"/>\n";
  for (const Polygon& poly : scenario.drivable) {
    out << "<polygon fill=\"white\" stroke=\"none\" points=\"";
    for (std::size_t k = 0; k < poly.size(); ++k) {
      out << num(view.sx(poly[k].x)) << ',' << num(view.sy(poly[k].y))
          << (k + 1 < poly.size() ? " " : "");
    }
    out << "\"/>\n";
  }

  VehicleState vs;
  vs.x = rec.ego.pose.x;
  vs.y = rec.ego.pose.y;
  vs.heading = rec.ego.pose.heading;
  vs.speed = rec.ego.speed;
  vs.steering = std::atan(scenario.ego.wheelbase() *
                          scenario.ego.path().curvature_at(rec.ego.arc, options.curvature_window));
  vs.wheelbase = scenario.ego.wheelbase();
  const RiskField field = build_field(vs, options.observer,
                                      default_field_geometry(vs, options.observer, options.field),
                                      options.field);
  const double peak = *std::max_element(field.grid.values().begin(), field.grid.values().end());
  if (peak > 0.0) {
    const char* colours[3] = {"#fdd49e", "#fc8d59", "#d7301f"};
    const double levels[3] = {0.25, 0.5, 0.75};
    for (int l = 0; l < 3; ++l) {
      out << "<g stroke=\"" << colours[l] << "\" stroke-width=\"0.15\">\n";
      for (const Segment& s : contour(field.grid, levels[l] * peak)) {
        out << "<line x1=\"" << num(view.sx(s.a.x)) << "\" y1=\"" << num(view.sy(s.a.y))
            << "\" x2=\"" << num(view.sx(s.b.x)) << "\" y2=\"" << num(view.sy(s.b.y)) << "\"/>\n";
      }
      out << "</g>\n";
    }
  }

  for (std::size_t i = 0; i < rec.agents.size(); ++i) {
    const Track& t = scenario.agents[i];
    rect(out, view, rec.agents[i].pose, t.length(), t.width(), "#969696");
  }
  rect(out, view, rec.ego.pose, scenario.ego.length(), scenario.ego.width(), "#3182bd");
  out << "<text x=\"1\" y=\"3\" font-size=\"2.5\">step " << rec.step << "  t=" << num(rec.t)
      << " s  risk=" << num(rec.ego_risk) << "</text>\n";
  out << "</svg>\n";
}

std::size_t write_plots(const std::filesystem::path& dir, const Scenario& scenario,
                        const RolloutLog& log, const SimOptions& options) {
  std::filesystem::create_directories(dir);
  std::ofstream csv(dir / "trajectory.csv", std::ios::binary);
  if (!csv) throw DataError((dir / "trajectory.csv").string() + ": cannot write");
  csv << "step,t,id,x,y,heading,speed,ego_risk\n";
  char buf[256];
  for (const StepRecord& s : log.steps) {
    auto row = [&](const VehicleRecord& r) {
      std::snprintf(buf, sizeof buf, "%d,%.9g,%s,%.9g,%.9g,%.9g,%.9g,%.9g\n", s.step, s.t,
                    r.id.c_str(), r.pose.x, r.pose.y, r.pose.heading, r.speed, s.ego_risk);
      csv << buf;
    };
    row(s.ego);
    for (const VehicleRecord& a : s.agents) row(a);
  }
  for (std::size_t k = 0; k < log.steps.size(); ++k) {
    std::snprintf(buf, sizeof buf, "frame_%03zu.svg", k);
    std::ofstream svg(dir / buf, std::ios::binary);
    if (!svg) throw DataError((dir / buf).string() + ": cannot write");
    write_svg_frame(svg, scenario, log, k, options);
  }
  return log.steps.size();
}

}  // namespace drf
