#include "hcdyn/serialize.hpp"

#include <cstdio>
#include <sstream>

#include "hcdyn/errors.hpp"

namespace hcdyn {

namespace {

nlohmann::json point_json(Point2 v) { return {{"x", v.x}, {"y", v.y}}; }

}  // namespace

std::string format_csv_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json to_json(const FixedPointRecord& r) {
  nlohmann::json ev = nlohmann::json::array();
  for (const auto& z : r.eigenvalues) {
    ev.push_back({{"re", z.real()}, {"im", z.imag()}});
  }
  return {{"x", r.location.x},
          {"y", r.location.y},
          {"family", std::string(to_string(r.family))},
          {"eigenvalues", ev},
          {"stability", std::string(to_string(r.stability))}};
}

FixedPointRecord fixed_point_from_json(const nlohmann::json& j) {
  try {
    FixedPointRecord r{};
    r.location = {j.at("x").get<double>(), j.at("y").get<double>()};
    const auto family = family_from_string(j.at("family").get<std::string>());
    const auto stability = stability_from_string(j.at("stability").get<std::string>());
    if (!family || !stability) {
      throw InvalidArgument("unknown family or stability label");
    }
    r.family = *family;
    r.stability = *stability;
    const auto& ev = j.at("eigenvalues");
    if (!ev.is_array() || ev.size() != 2) {
      throw InvalidArgument("eigenvalues must be a pair");
    }
    for (std::size_t k = 0; k < 2; ++k) {
      r.eigenvalues[k] = {ev[k].at("re").get<double>(), ev[k].at("im").get<double>()};
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed fixed-point record: ") + e.what());
  }
}

std::string fixed_points_json(const std::vector<FixedPointRecord>& fps) {
  nlohmann::json arr = nlohmann::json::array();
  for (const FixedPointRecord& r : fps) {
    arr.push_back(to_json(r));
  }
  return arr.dump(2) + "\n";
}

std::string fixed_points_csv(const std::vector<FixedPointRecord>& fps) {
  std::ostringstream os;
  os << "x,y,family,ev1_re,ev1_im,ev2_re,ev2_im,stability\n";
  for (const FixedPointRecord& r : fps) {
    os << format_csv_number(r.location.x) << ',' << format_csv_number(r.location.y) << ','
       << to_string(r.family);
    for (const auto& z : r.eigenvalues) {
      os << ',' << format_csv_number(z.real()) << ',' << format_csv_number(z.imag());
    }
    os << ',' << to_string(r.stability) << '\n';
  }
  return os.str();
}

nlohmann::json to_json(const Trajectory& tr) {
  nlohmann::json pts = nlohmann::json::array();
  for (const TrajectorySample& s : tr.points) {
    pts.push_back({{"step", s.step}, {"x", s.point.x}, {"y", s.point.y}});
  }
  nlohmann::json j = {{"start", point_json(tr.start)},
                      {"iterations", tr.iterations},
                      {"final", point_json(tr.final_point)},
                      {"converged", tr.converged},
                      {"converged_at", nullptr},
                      {"limit", nullptr},
                      {"residual", tr.residual},
                      {"points", pts}};
  if (tr.converged_at) {
    j["converged_at"] = *tr.converged_at;
  }
  if (tr.limit) {
    j["limit"] = point_json(*tr.limit);
  }
  return j;
}

nlohmann::json to_json(const LimitVerdict& v) {
  nlohmann::json j = {{"rule", std::string(to_string(v.rule))},
                      {"limit", nullptr},
                      {"family", nullptr},
                      {"omega_box", {{"lo", v.box.lo}, {"hi", v.box.hi}}},
                      {"mirrored", v.mirrored}};
  if (v.limit) {
    j["limit"] = point_json(*v.limit);
  }
  if (v.family) {
    j["family"] = std::string(to_string(*v.family));
  }
  return j;
}

std::string trajectory_csv(const Trajectory& tr) {
  std::ostringstream os;
  os << "step,x,y\n";
  for (const TrajectorySample& s : tr.points) {
    os << s.step << ',' << format_csv_number(s.point.x) << ',' << format_csv_number(s.point.y)
       << '\n';
  }
  return os.str();
}

std::string bracket_csv(const BracketSequence& b) {
  std::ostringstream os;
  os << "n,l1,l2\n";
  for (std::size_t k = 0; k < b.lower.size(); ++k) {
    os << k << ',' << format_csv_number(b.lower[k]) << ',' << format_csv_number(b.upper[k]) << '\n';
  }
  return os.str();
}

nlohmann::json to_json(const BracketSequence& b) {
  return {{"l1", b.lower}, {"l2", b.upper}};
}

nlohmann::json to_json(const WeightSeq& w) { return w.lambda(); }

nlohmann::json to_json(const TruncatedVector& x) { return x.entries(); }

}  // namespace hcdyn
