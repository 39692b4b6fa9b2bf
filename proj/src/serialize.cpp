#include "localdist/serialize.hpp"

#include <cstdio>
#include <json.hpp>
#include <sstream>

#include "localdist/error.hpp"

namespace localdist {

using nlohmann::json;

std::string behavior_to_json(const Behavior& P, const char* key) {
  const auto& d = P.dims();
  std::vector<double> flat;
  flat.reserve(d.table_size());
  for (int r = 0; r < d.R; ++r)
    for (int s = 0; s < d.S; ++s)
      for (int a = 0; a < d.A; ++a)
        for (int b = 0; b < d.B; ++b) flat.push_back(P(r, s, a, b));
  json j;
  j["A"] = d.A;
  j["B"] = d.B;
  j["R"] = d.R;
  j["S"] = d.S;
  j[key] = std::move(flat);
  return j.dump();
}

Behavior behavior_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Parse, std::string("behavior JSON: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorKind::Parse, "behavior JSON: expected an object");

  BehaviorDims d;
  int* fields[] = {&d.A, &d.B, &d.R, &d.S};
  const char* names[] = {"A", "B", "R", "S"};
  for (int i = 0; i < 4; ++i) {
    auto it = j.find(names[i]);
    if (it == j.end() || !it->is_number_integer())
      fail(ErrorKind::Parse, std::string("behavior JSON: missing integer '") + names[i] + "'");
    const auto v = it->get<long long>();
    if (v < 1 || v > (1LL << 30))
      fail(ErrorKind::InvalidArgument, std::string("behavior JSON: bad '") + names[i] + "'");
    *fields[i] = int(v);
  }
  check_dims(d);

  const json* arr = nullptr;
  if (auto it = j.find("p"); it != j.end()) arr = &*it;
  else if (auto it2 = j.find("g"); it2 != j.end()) arr = &*it2;
  if (!arr || !arr->is_array())
    fail(ErrorKind::Parse, "behavior JSON: missing array 'p'");
  if (arr->size() != d.table_size())
    fail(ErrorKind::DimensionMismatch, "behavior JSON: table has " +
                                           std::to_string(arr->size()) + " entries, expected " +
                                           std::to_string(d.table_size()));

  Behavior P(d);
  std::size_t idx = 0;
  for (int r = 0; r < d.R; ++r)
    for (int s = 0; s < d.S; ++s)
      for (int a = 0; a < d.A; ++a)
        for (int b = 0; b < d.B; ++b) {
          const auto& v = (*arr)[idx++];
          if (!v.is_number()) fail(ErrorKind::Parse, "behavior JSON: non-numeric entry");
          P.at(r, s, a, b) = v.get<double>();
        }
  return P;
}

namespace {

json strategy_json(const StrategyPair& sp) { return {{"r", sp.r}, {"s", sp.s}}; }

}  // namespace

std::string report_to_json(const SolveReport& rep, const SolveOptions& opts) {
  json j;
  j["schema"] = kReportSchema;
  j["dims"] = {{"A", rep.dims.A}, {"B", rep.dims.B}, {"R", rep.dims.R}, {"S", rep.dims.S}};
  j["distance"] = rep.distance;
  j["F_plus"] = rep.F_plus;
  j["F_minus"] = rep.F_minus;
  j["gap"] = rep.gap;
  j["certified"] = rep.certified;
  j["termination"] = to_string(rep.termination);
  j["iterations"] = rep.iterations;
  j["oracle_calls"] = rep.oracle_calls;
  j["millis"] = rep.millis;
  j["options"] = {{"epsilon", opts.epsilon},
                  {"gamma", opts.gamma},
                  {"oracle", to_string(opts.oracle_mode)},
                  {"seed", opts.seed},
                  {"strict_cleanup", opts.strict_cleanup}};

  json verts = json::array();
  for (const auto& e : rep.vertices.entries()) {
    json v = strategy_json(e.strategy);
    v["weight"] = e.weight;
    verts.push_back(std::move(v));
  }
  j["vertices"] = std::move(verts);

  json trace = json::array();
  for (const auto& t : rep.trace) {
    trace.push_back({{"iter", t.iter},
                     {"F_plus", t.F_plus},
                     {"F_minus", t.F_minus},
                     {"best_F_minus", t.best_F_minus},
                     {"gap", t.gap},
                     {"alpha", t.alpha},
                     {"beta", t.beta},
                     {"omega_before", t.omega_before},
                     {"omega_after", t.omega_after},
                     {"sweeps", t.sweeps},
                     {"inner_iterations", t.inner_iterations},
                     {"exact_alpha", t.exact_alpha},
                     {"millis", t.millis}});
  }
  j["trace"] = std::move(trace);
  return j.dump(2);
}

std::string trace_to_csv(const SolveReport& rep) {
  std::ostringstream out;
  out << "iter,F_plus,F_minus,gap,alpha,beta,omega_size,millis\n";
  char buf[256];
  for (const auto& t : rep.trace) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%zu,%.3f\n",
                  t.iter, t.F_plus, t.best_F_minus, t.gap, t.alpha, t.beta,
                  t.omega_after, t.millis);
    out << buf;
  }
  return out.str();
}

std::string oracle_answer_to_json(const OracleAnswer& ans) {
  json j = strategy_json(ans.strategy);
  j["value"] = ans.value;
  j["sweeps"] = ans.sweeps;
  j["hit_sweep_limit"] = ans.hit_sweep_limit;
  return j.dump();
}

}  // namespace localdist
