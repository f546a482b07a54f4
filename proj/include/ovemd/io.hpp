#pragma once

// JSON file formats.  Instances carry their points inline; matchings carry the
// pair list plus the cost as a decimal string (exact for integer costs, 21
// significant digits for Euclidean ones); reduction sidecars carry the handful
// of scalars a decoder needs, big values as decimal strings since JSON numbers
// round-trip reliably only inside the 64-bit integer range.
//
// All writers emit ordered keys and a trailing newline, so identical inputs
// produce byte-identical files.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <string>
#include <variant>

#include <json.hpp>

#include "ovemd/errors.hpp"
#include "ovemd/exact_reduction.hpp"
#include "ovemd/gadgets.hpp"
#include "ovemd/generate.hpp"
#include "ovemd/matching.hpp"
#include "ovemd/vectors.hpp"

namespace ovemd {

using Json = nlohmann::ordered_json;

inline std::string format_cost(const Int& v) { return v.str(); }
inline std::string format_cost(long double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.21Lg", v);
  return buf;
}

// ---- instances -------------------------------------------------------------

inline Json instance_to_json(const BinaryPair& p) {
  Json j;
  j["kind"] = "binary";
  j["dim"] = p.dim;
  j["left"] = Json::array();
  j["right"] = Json::array();
  for (const auto& v : p.left) j["left"].push_back(v.bits());
  for (const auto& v : p.right) j["right"].push_back(v.bits());
  return j;
}

inline Json instance_to_json(const IntPair& p) {
  Json j;
  j["kind"] = "integer";
  j["dim"] = p.dim;
  j["left"] = Json::array();
  j["right"] = Json::array();
  auto side = [](const std::vector<IntVector>& vs, Json& out) {
    for (const auto& v : vs) {
      Json row = Json::array();
      for (const Int& x : v.coords()) {
        if (x > std::numeric_limits<std::int64_t>::max() || x < std::numeric_limits<std::int64_t>::min())
          throw capacity_error("instance files store coordinates as 64-bit integers");
        row.push_back(x.convert_to<std::int64_t>());
      }
      out.push_back(std::move(row));
    }
  };
  side(p.left, j["left"]);
  side(p.right, j["right"]);
  return j;
}

inline Json instance_to_json(const Instance& inst) {
  return std::visit([](const auto& p) { return instance_to_json(p); }, inst);
}

inline Instance instance_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.contains("dim") || !j.contains("left") ||
      !j.contains("right"))
    throw param_error("instance file needs kind, dim, left, right");
  const std::string kind = j.at("kind").get<std::string>();
  const int dim = j.at("dim").get<int>();
  auto coords_of = [&](const Json& row) {
    if (!row.is_array() || static_cast<int>(row.size()) != dim)
      throw param_error("point with wrong arity");
    return row;
  };
  if (kind == "binary") {
    BinaryPair p;
    p.dim = dim;
    auto side = [&](const Json& rows, std::vector<BinaryVector>& out) {
      for (const auto& row : rows) {
        std::vector<int> bits;
        for (const auto& x : coords_of(row)) {
          if (!x.is_number_integer()) throw param_error("binary coordinate must be 0 or 1");
          bits.push_back(x.get<int>());
        }
        out.push_back(BinaryVector::from_bits(bits));
      }
    };
    side(j.at("left"), p.left);
    side(j.at("right"), p.right);
    return p;
  }
  if (kind == "integer") {
    IntPair p;
    p.dim = dim;
    auto side = [&](const Json& rows, std::vector<IntVector>& out) {
      for (const auto& row : rows) {
        std::vector<Int> coords;
        for (const auto& x : coords_of(row)) {
          if (!x.is_number_integer())  // also rejects floats, which do not round-trip
            throw param_error("integer coordinate must be a JSON integer");
          coords.emplace_back(x.get<std::int64_t>());
        }
        out.push_back(IntVector(std::move(coords)));
      }
    };
    side(j.at("left"), p.left);
    side(j.at("right"), p.right);
    return p;
  }
  throw param_error("unknown instance kind: " + kind);
}

// ---- matchings -------------------------------------------------------------

template <class Cost>
inline Json matching_to_json(const Matching<Cost>& m) {
  Json j;
  j["kind"] = m.kind == MatchKind::bijection ? "bijection" : "injection";
  j["cost"] = format_cost(m.cost);
  j["pairs"] = Json::array();
  for (auto [l, r] : m.pairs) j["pairs"].push_back(Json::array({l, r}));
  return j;
}

inline Matching<long double> matching_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.contains("cost") || !j.contains("pairs"))
    throw param_error("matching file needs kind, cost, pairs");
  Matching<long double> m;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "bijection") m.kind = MatchKind::bijection;
  else if (kind == "injection") m.kind = MatchKind::injection;
  else throw param_error("unknown matching kind: " + kind);
  m.cost = strtold(j.at("cost").get<std::string>().c_str(), nullptr);
  for (const auto& row : j.at("pairs")) {
    if (!row.is_array() || row.size() != 2) throw param_error("matching pair with wrong arity");
    m.pairs.emplace_back(row[0].get<int>(), row[1].get<int>());
  }
  return m;
}

// ---- reduction sidecars ----------------------------------------------------

inline Json exact_sidecar_to_json(const ReducedExactInstance& inst, ScaleMode mode) {
  Json j;
  j["reduction"] = "exact-emd";
  j["n"] = inst.n;
  j["d"] = inst.d;
  j["k"] = to_string(inst.k);
  j["c"] = inst.c;
  j["mode"] = mode == ScaleMode::paper ? "paper" : "desk";
  j["big_n"] = inst.big_n.str();
  j["edge_unit"] = inst.edge_unit.str();
  j["adj_norm_sq"] = inst.adj_norm_sq.str();
  j["coord_bound"] = inst.coord_bound.str();
  return j;
}

// Enough of the instance to run the decoders; the point sets themselves live
// in the instance file.
inline ReducedExactInstance exact_sidecar_from_json(const Json& j) {
  if (!j.is_object() || j.value("reduction", "") != std::string("exact-emd"))
    throw param_error("not an exact-emd sidecar");
  ReducedExactInstance inst;
  inst.n = j.at("n").get<int>();
  inst.d = j.at("d").get<int>();
  inst.k = parse_ratio(j.at("k").get<std::string>());
  inst.c = j.at("c").get<int>();
  inst.big_n = Int(j.at("big_n").get<std::string>());
  inst.edge_unit = Int(j.at("edge_unit").get<std::string>());
  inst.adj_norm_sq = Int(j.at("adj_norm_sq").get<std::string>());
  inst.coord_bound = Int(j.at("coord_bound").get<std::string>());
  return inst;
}

inline Json symmetrize_sidecar_to_json(const SymmetrizedInstance& s) {
  Json j;
  j["reduction"] = "symmetrize";
  j["original_left"] = s.original_left;
  j["input_dim"] = s.input_dim;
  return j;
}

inline Json mom_sidecar_to_json(const MomGadget& g) {
  Json j;
  j["reduction"] = "mom-gadget";
  j["d"] = g.d;
  j["a_count"] = g.a_count;
  j["b_count"] = g.b_count;
  j["dim"] = g.layout.dim;
  return j;
}

inline Json lowrank_to_json(const LowRankFactorization& f) {
  Json j;
  j["reduction"] = "lowrank";
  j["rank"] = f.rank;
  auto rows = [](const std::vector<std::vector<Int>>& m) {
    Json out = Json::array();
    for (const auto& row : m) {
      Json r = Json::array();
      for (const Int& x : row) r.push_back(x.str());
      out.push_back(std::move(r));
    }
    return out;
  };
  j["u"] = rows(f.u);
  j["v"] = rows(f.v);
  return j;
}

// ---- files -----------------------------------------------------------------

inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw param_error("cannot open for writing: " + path);
  out << j.dump(2) << '\n';
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw param_error("cannot open: " + path);
  return Json::parse(in);  // throws nlohmann parse_error on malformed input
}

}  // namespace ovemd
