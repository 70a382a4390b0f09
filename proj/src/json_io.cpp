#include "fglab/json_io.hpp"

namespace fglab {

namespace {

u64 get_u64(const nlohmann::json& j, const char* key, u64 lo, u64 hi) {
  if (!j.contains(key) || !j[key].is_number_unsigned())
    throw MalformedInput(std::string("missing or non-integral field '") + key + "'");
  u64 v = j[key].get<u64>();
  if (v < lo || v > hi)
    throw MalformedInput(std::string("field '") + key + "' out of range");
  return v;
}

}  // namespace

nlohmann::json ring_to_json(const Ring& R) {
  return nlohmann::json{{"p", R->p}, {"d", R->d}, {"N", R->N}};
}

Ring ring_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw MalformedInput("ring: expected an object");
  u32 p = (u32)get_u64(j, "p", 2, 1u << 20);
  u32 d = (u32)get_u64(j, "d", 1, 16);
  u32 N = (u32)get_u64(j, "N", 1, 62);
  try {
    return RingConfig::make(p, d, N);
  } catch (const std::invalid_argument& e) {
    throw MalformedInput(std::string("ring: ") + e.what());
  }
}

nlohmann::json witt_to_json(const Witt& w) {
  nlohmann::json coords = nlohmann::json::array();
  for (u64 c : w.coords()) coords.push_back(c);
  return nlohmann::json{{"coords", coords}};
}

namespace {

Witt witt_from_json(const Ring& R, const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("coords") || !j["coords"].is_array())
    throw MalformedInput("element: expected {\"coords\": [...]}");
  auto arr = j["coords"];
  if (arr.size() != R->d) throw MalformedInput("element: wrong coordinate count");
  std::vector<u64> c;
  for (const auto& x : arr) {
    if (!x.is_number_unsigned()) throw MalformedInput("element: coordinates are nonnegative integers");
    u64 v = x.get<u64>();
    if (v >= R->pN) throw MalformedInput("element: coordinate not reduced mod p^N");
    c.push_back(v);
  }
  return R->from_coords(std::move(c));
}

nlohmann::json wmatrix_to_json(const WMatrix& M, u32 eff) {
  nlohmann::json rows = nlohmann::json::array();
  for (u32 i = 0; i < M.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (u32 j = 0; j < M.cols(); ++j) row.push_back(witt_to_json(M.at(i, j).truncated(eff)));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

nlohmann::json module_to_json(const DieudonneModule& M) {
  u32 eff = std::min(M.F.min_eff(), M.V.min_eff());
  auto Rout = RingConfig::make(M.ring->p, M.ring->d, eff);
  nlohmann::json j;
  j["ring"] = ring_to_json(Rout);
  j["rank"] = M.rank;
  j["F"] = wmatrix_to_json(M.F, eff);
  j["V"] = wmatrix_to_json(M.V, eff);
  return j;
}

DieudonneModule module_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw MalformedInput("module: expected an object");
  if (!j.contains("ring")) throw MalformedInput("module: missing ring");
  Ring R = ring_from_json(j["ring"]);
  u32 rank = (u32)get_u64(j, "rank", 1, 64);
  DieudonneModule M;
  M.ring = R;
  M.rank = rank;
  auto load_mat = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_array() || j[key].size() != rank)
      throw MalformedInput(std::string("module: matrix '") + key + "' has wrong shape");
    WMatrix m(R, rank, rank);
    for (u32 i = 0; i < rank; ++i) {
      const auto& row = j[key][i];
      if (!row.is_array() || row.size() != rank)
        throw MalformedInput(std::string("module: matrix '") + key + "' has wrong shape");
      for (u32 c = 0; c < rank; ++c) m.at(i, c) = witt_from_json(R, row[c]);
    }
    return m;
  };
  M.F = load_mat("F");
  M.V = load_mat("V");
  return M;
}

namespace {

nlohmann::json fq_elem_to_json(const Ring& R, u32 idx) {
  if (R->d == 1) return idx;
  nlohmann::json arr = nlohmann::json::array();
  u32 v = idx;
  for (u32 i = 0; i < R->d; ++i) {
    arr.push_back(v % R->p);
    v /= R->p;
  }
  return arr;
}

u32 fq_elem_from_json(const Ring& R, const nlohmann::json& j) {
  if (R->d == 1) {
    if (!j.is_number_unsigned() || j.get<u64>() >= R->p)
      throw MalformedInput("fgl: coefficient out of range");
    return j.get<u32>();
  }
  if (!j.is_array() || j.size() != R->d) throw MalformedInput("fgl: coefficient has wrong shape");
  u32 v = 0;
  for (u32 i = R->d; i-- > 0;) {
    if (!j[i].is_number_unsigned() || j[i].get<u64>() >= R->p)
      throw MalformedInput("fgl: coefficient digit out of range");
    v = v * R->p + j[i].get<u32>();
  }
  return v;
}

}  // namespace

nlohmann::json fgl_to_json(const Fgl& F) {
  const Ring& R = F.ring();
  nlohmann::json j;
  j["p"] = R->p;
  j["d"] = R->d;
  j["D"] = F.degree_bound();
  nlohmann::json coeffs = nlohmann::json::array();
  for (u32 i = 0; i <= F.degree_bound(); ++i)
    for (u32 jj = 0; i + jj <= F.degree_bound(); ++jj) {
      u32 c = F.coeff(i, jj);
      if (!c) continue;
      coeffs.push_back(nlohmann::json::array({i, jj, fq_elem_to_json(R, c)}));
    }
  j["coeffs"] = coeffs;
  return j;
}

Fgl fgl_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw MalformedInput("fgl: expected an object");
  u32 p = (u32)get_u64(j, "p", 2, 1u << 20);
  u32 d = (u32)get_u64(j, "d", 1, 16);
  u32 D = (u32)get_u64(j, "D", 2, 4096);
  Ring R;
  try {
    R = RingConfig::make(p, d, 1);
  } catch (const std::invalid_argument& e) {
    throw MalformedInput(std::string("fgl: ") + e.what());
  }
  Fgl F(R, D);
  if (!j.contains("coeffs") || !j["coeffs"].is_array()) throw MalformedInput("fgl: missing coeffs");
  for (const auto& ent : j["coeffs"]) {
    if (!ent.is_array() || ent.size() != 3) throw MalformedInput("fgl: coefficient entries are [i, j, elem]");
    if (!ent[0].is_number_unsigned() || !ent[1].is_number_unsigned())
      throw MalformedInput("fgl: exponents are nonnegative integers");
    u32 i = ent[0].get<u32>(), jj = ent[1].get<u32>();
    if (i + jj > D) throw MalformedInput("fgl: coefficient beyond the truncation degree");
    F.set_coeff(i, jj, fq_elem_from_json(R, ent[2]));
  }
  return F;
}

nlohmann::json series_to_json(const Series& s) {
  nlohmann::json arr = nlohmann::json::array();
  for (u32 e = 0; e <= s.degree_bound(); ++e) {
    if (!s.coeff(e)) continue;
    arr.push_back(nlohmann::json::array({e, fq_elem_to_json(s.ring(), s.coeff(e))}));
  }
  return arr;
}

nlohmann::json pseries_table_to_json(const std::vector<GradedPoly>& table) {
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t e = 0; e < table.size(); ++e) {
    if (table[e].is_zero()) continue;
    nlohmann::json coeff = nlohmann::json::object();
    for (const auto& [exps, c] : table[e].terms()) {
      GradedPoly mono(table[e].p(), table[e].h());
      mono.add_term(exps, 1);
      coeff[mono.to_string()] = c;
    }
    out.push_back(nlohmann::json::array({e, coeff}));
  }
  return out;
}

std::string dump_canonical(const nlohmann::json& j) { return j.dump(2) + "\n"; }

} // namespace fglab
