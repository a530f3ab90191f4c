#pragma once

#include <charconv>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "skellam/bounds.hpp"
#include "skellam/components.hpp"
#include "skellam/lattice_measure.hpp"
#include "skellam/norms.hpp"

namespace skellam {

/// Shortest decimal that round-trips to the same IEEE double.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// ---- measure JSON: {"offset": int, "weights": [float...]} ----

inline nlohmann::json measure_to_json(const LatticeMeasure& m) {
  return nlohmann::json{{"offset", m.offset()}, {"weights", m.weights()}};
}

inline LatticeMeasure measure_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("offset") || !j.contains("weights"))
    throw std::invalid_argument("measure JSON must be {\"offset\": int, \"weights\": [...]}");
  return LatticeMeasure(j.at("offset").get<std::int64_t>(),
                        j.at("weights").get<std::vector<double>>());
}

// ---- enum <-> string maps (CLI names are lowercase) ----

inline std::string to_string(NormKind kind) {
  switch (kind.family) {
    case NormKind::Family::Local: return "local";
    case NormKind::Family::TotalVariation: return "tv";
    case NormKind::Family::Wasserstein: return "wasserstein";
    case NormKind::Family::Lr: return "lr" + format_double(kind.r);
    case NormKind::Family::CapLr: return "Lr" + format_double(kind.r);
  }
  return "tv";
}

inline NormKind norm_kind_from_string(const std::string& s) {
  if (s == "tv") return NormKind::tv();
  if (s == "local") return NormKind::local();
  if (s == "wasserstein" || s == "wass") return NormKind::wasserstein();
  auto parse_r = [&](std::size_t prefix) {
    const std::string tail = s.substr(prefix);
    if (tail.empty()) return 1.0;
    std::size_t pos = 0;
    const double r = std::stod(tail, &pos);
    if (pos != tail.size()) throw std::invalid_argument("bad norm kind: " + s);
    return r;
  };
  if (s.rfind("lr", 0) == 0) return NormKind::lr(parse_r(2));
  if (s.rfind("Lr", 0) == 0) return NormKind::cap_lr(parse_r(2));
  throw std::invalid_argument("unknown metric '" + s +
                              "' (expect tv|local|wasserstein|lr<r>|Lr<r>)");
}

inline std::string to_string(TheoremId id) {
  switch (id) {
    case TheoremId::EKG: return "ekg";
    case TheoremId::Skellam: return "skellam";
    case TheoremId::Expansion: return "expansion";
    case TheoremId::Explicit: return "explicit";
    case TheoremId::LrInterp: return "lr";
  }
  return "skellam";
}

inline TheoremId theorem_from_string(const std::string& s) {
  if (s == "ekg") return TheoremId::EKG;
  if (s == "skellam") return TheoremId::Skellam;
  if (s == "expansion") return TheoremId::Expansion;
  if (s == "explicit") return TheoremId::Explicit;
  if (s == "lr") return TheoremId::LrInterp;
  throw std::invalid_argument("unknown approximant '" + s +
                              "' (expect ekg|skellam|expansion|explicit|lr)");
}

inline std::string to_string(ComponentName name) {
  switch (name) {
    case ComponentName::L: return "l";
    case ComponentName::U: return "u";
    case ComponentName::H: return "h";
    case ComponentName::E: return "e";
    case ComponentName::K: return "k";
    case ComponentName::Delta: return "delta";
    case ComponentName::Lambda1: return "lambda1";
    case ComponentName::Lambda2: return "lambda2";
    case ComponentName::W1: return "w1";
    case ComponentName::W2: return "w2";
    case ComponentName::P1: return "p1";
    case ComponentName::P2: return "p2";
    case ComponentName::G: return "g";
    case ComponentName::D: return "d";
    case ComponentName::A0: return "a0";
    case ComponentName::A1: return "a1";
    case ComponentName::A2: return "a2";
  }
  return "l";
}

inline ComponentName component_from_string(const std::string& s) {
  static const std::vector<ComponentName> all = {
      ComponentName::L,  ComponentName::U,       ComponentName::H,
      ComponentName::E,  ComponentName::K,       ComponentName::Delta,
      ComponentName::Lambda1, ComponentName::Lambda2, ComponentName::W1,
      ComponentName::W2, ComponentName::P1,      ComponentName::P2,
      ComponentName::G,  ComponentName::D,       ComponentName::A0,
      ComponentName::A1, ComponentName::A2};
  for (ComponentName c : all)
    if (to_string(c) == s) return c;
  throw std::invalid_argument("unknown component '" + s + "'");
}

// ---- sweep rows: CSV and JSON with the same field names ----

inline constexpr const char* kSweepCsvHeader =
    "alpha,beta,p1,p2,p3,n,metric,approximant,lhs,shape,ratio,truncation";

inline std::string sweep_rows_to_csv(const std::vector<SweepRow>& rows) {
  std::string out = kSweepCsvHeader;
  out += '\n';
  for (const SweepRow& r : rows) {
    out += format_double(r.alpha) + ',' + format_double(r.beta) + ',' +
           format_double(r.p1) + ',' + format_double(r.p2) + ',' +
           format_double(r.p3) + ',' + std::to_string(r.n) + ',' +
           to_string(r.metric) + ',' + to_string(r.approximant) + ',' +
           format_double(r.lhs) + ',' + format_double(r.shape) + ',' +
           format_double(r.ratio) + ',' + format_double(r.truncation) + '\n';
  }
  return out;
}

inline nlohmann::json sweep_rows_to_json(const std::vector<SweepRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const SweepRow& r : rows) {
    nlohmann::json obj{{"alpha", r.alpha},
                       {"beta", r.beta},
                       {"p1", r.p1},
                       {"p2", r.p2},
                       {"p3", r.p3},
                       {"n", r.n},
                       {"metric", to_string(r.metric)},
                       {"approximant", to_string(r.approximant)},
                       {"lhs", r.lhs},
                       {"shape", r.shape},
                       {"ratio", r.ratio},
                       {"truncation", r.truncation}};
    if (!r.error.empty()) obj["error"] = r.error;
    arr.push_back(std::move(obj));
  }
  return arr;
}

/// Parse rows produced by sweep_rows_to_csv. Tolerates "nan" numeric fields
/// (failed rows).
inline std::vector<SweepRow> sweep_rows_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty CSV");
  if (line != kSweepCsvHeader)
    throw std::invalid_argument("unexpected CSV header: " + line);
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    for (;;) {
      const std::size_t pos = line.find(',', start);
      f.push_back(line.substr(start, pos - start));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    if (f.size() != 12)
      throw std::invalid_argument("bad CSV row (expected 12 fields): " + line);
    SweepRow r;
    r.alpha = std::stod(f[0]);
    r.beta = std::stod(f[1]);
    r.p1 = std::stod(f[2]);
    r.p2 = std::stod(f[3]);
    r.p3 = std::stod(f[4]);
    r.n = std::stoll(f[5]);
    r.metric = norm_kind_from_string(f[6]);
    r.approximant = theorem_from_string(f[7]);
    r.lhs = std::stod(f[8]);
    r.shape = std::stod(f[9]);
    r.ratio = std::stod(f[10]);
    r.truncation = std::stod(f[11]);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace skellam
