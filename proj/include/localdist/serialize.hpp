#pragma once

// JSON and CSV exchange formats.
//
// Behavior JSON: {"A":..,"B":..,"R":..,"S":..,"p":[...]} with p of length
// R*S*A*B ordered r-major, then s, then a, then b:
//   index = ((r*S + s)*A + a)*B + b
// Outcome index 0 stands for the +1 outcome. Oracle queries use the same
// layout, under "g" instead of "p" (either key is accepted on input).

#include <string>

#include "localdist/behavior.hpp"
#include "localdist/oracle.hpp"
#include "localdist/solver.hpp"

namespace localdist {

inline constexpr int kReportSchema = 1;

std::string behavior_to_json(const Behavior& P, const char* key = "p");
// Throws ErrorKind::Parse on malformed input.
Behavior behavior_from_json(const std::string& text);

std::string report_to_json(const SolveReport& rep, const SolveOptions& opts);

// iter,F_plus,F_minus,gap,alpha,beta,omega_size,millis
std::string trace_to_csv(const SolveReport& rep);

std::string oracle_answer_to_json(const OracleAnswer& ans);

}  // namespace localdist
