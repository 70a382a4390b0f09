// fglab: exact arithmetic for truncated Witt rings, Dieudonne modules,
// formal group laws and the Hopf-ring nilpotence certificate.
//
// Subcommands: validate, exterior, detect-gm-module, fgl, hopf.
// Exit codes: 0 success / verified, 1 negative verdict / refuted,
// 2 malformed input or parameter error.

#include "CLI11.hpp"

#include "fglab/hopfring.hpp"
#include "fglab/json_io.hpp"

#include <fstream>
#include <functional>
#include <iostream>

using namespace fglab;
using nlohmann::json;

namespace {

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedInput("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw MalformedInput("parse error in '" + path + "': " + e.what());
  }
  return j;
}

void emit(const json& payload, const std::string& out_path, const std::string& format) {
  std::string text;
  if (format == "table") {
    // a flat rendering of the same data, never a separate computation
    std::function<void(const json&, std::string)> walk = [&](const json& v, std::string prefix) {
      if (v.is_object()) {
        for (auto it = v.begin(); it != v.end(); ++it)
          walk(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key());
      } else {
        text += prefix + " = " + v.dump() + "\n";
      }
    };
    walk(payload, "");
  } else {
    text = dump_canonical(payload);
  }
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
    out << text;
  }
}

json mult_report_json(const MultReport& rep) {
  json j;
  j["multiplicative"] = rep.multiplicative;
  if (!rep.reason.empty()) j["reason"] = rep.reason;
  if (rep.witness) j["witness"] = witt_to_json(*rep.witness);
  return j;
}

int run(int argc, char** argv) {
  CLI::App app{"exact Dieudonne-module / formal-group / Hopf-ring calculator"};
  app.set_config("--config", "", "TOML config with default parameters");
  app.require_subcommand(1);
  std::string out_path, format = "json";
  app.add_option("--out", out_path, "write the payload to a file instead of stdout");
  app.add_option("--format", format, "json | table")->check(CLI::IsMember({"json", "table"}));

  auto* c_val = app.add_subcommand("validate", "check the Dieudonne-module invariants");
  std::string val_path;
  c_val->add_option("module", val_path, "module JSON file")->required();

  auto* c_ext = app.add_subcommand("exterior", "exterior power of a module");
  std::string ext_path;
  u32 ext_m = 1;
  c_ext->add_option("module", ext_path, "module JSON file")->required();
  c_ext->add_option("--m", ext_m, "exterior power")->required();

  auto* c_det = app.add_subcommand("detect-gm-module",
                                   "is the top exterior power the multiplicative module?");
  std::string det_path;
  c_det->add_option("module", det_path, "module JSON file")->required();

  auto* c_fgl = app.add_subcommand("fgl", "formal-group-law operations");
  c_fgl->require_subcommand(1);
  std::string fgl_path;
  u32 fgl_deg = 0;
  auto* c_ps = c_fgl->add_subcommand("pseries", "p-series table");
  auto* c_ht = c_fgl->add_subcommand("height", "height at truncation");
  auto* c_ws = c_fgl->add_subcommand("westerland", "solve the multiplicativity equation");
  auto* c_dt = c_fgl->add_subcommand("detect", "detect an isomorphism to the multiplicative law");
  for (auto* sub : {c_ps, c_ht, c_ws, c_dt}) {
    sub->add_option("fgl", fgl_path, "formal group law JSON file")->required();
    sub->add_option("--degree", fgl_deg, "working degree (default: the file's D)");
  }

  auto* c_hopf = app.add_subcommand("hopf", "Hopf-ring verifiers");
  c_hopf->require_subcommand(1);
  u32 hp = 2, hh = 0, hn = 2, hm = 5;
  auto* c_xp = c_hopf->add_subcommand("verify-xpzero", "replay the u^p = 0 certificate");
  c_xp->set_help_flag("--help", "print help");  // frees -h for the height flag
  c_xp->add_option("--p", hp, "prime")->required();
  c_xp->add_option("--h", hh, "BP<h> truncation height")->required();
  c_xp->add_option("--n", hn, "Morava height, n > h+1")->required();
  auto* c_f0 = c_hopf->add_subcommand("f0", "f0 non-nilpotence table");
  c_f0->set_help_flag("--help", "print help");
  c_f0->add_option("--p", hp, "prime")->required();
  c_f0->add_option("--h", hh, "height, >= 1")->required();
  c_f0->add_option("--m", hm, "largest p-power exponent");

  // parent --out/--format may follow the subcommand tokens
  for (auto* sub : {c_val, c_ext, c_det, c_fgl, c_hopf, c_ps, c_ht, c_ws, c_dt, c_xp, c_f0})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return 2;
  }

  try {
    if (*c_val) {
      auto M = module_from_json(read_json_file(val_path));
      auto rep = validate(M);
      json j;
      j["pass"] = rep.pass();
      j["checks"] = {{"shape", rep.shape_ok},
                     {"fv_is_p", rep.fv_ok},
                     {"vf_is_p", rep.vf_ok},
                     {"covdim_is_expected", rep.covrank_ok},
                     {"v_nilpotent_mod_p", rep.vnilp_ok}};
      j["covdim"] = rep.covdim;
      j["messages"] = rep.messages;
      emit(j, out_path, format);
      return rep.pass() ? 0 : 1;
    }
    if (*c_ext) {
      auto M = module_from_json(read_json_file(ext_path));
      if (ext_m < 1 || ext_m > M.rank) throw MalformedInput("exterior: need 1 <= m <= rank");
      emit(module_to_json(exterior_power(M, ext_m)), out_path, format);
      return 0;
    }
    if (*c_det) {
      auto M = module_from_json(read_json_file(det_path));
      auto rep = validate(M);
      if (!rep.pass()) throw MalformedInput("detect-gm-module: input fails validation");
      auto [iso, inv] = top_exterior_is_gm(M);
      auto mult = is_multiplicative(exterior_power(M, M.rank));
      json j;
      j["verdict"] = iso ? "ISO" : "NOT-ISO";
      j["alpha"] = witt_to_json(inv.alpha);
      j["alpha_is_unit"] = inv.is_unit;
      j["detail"] = mult_report_json(mult);
      emit(j, out_path, format);
      return iso ? 0 : 1;
    }
    if (*c_fgl) {
      auto F = fgl_from_json(read_json_file(fgl_path));
      // default working degree: p^3, capped by the file's truncation
      u32 D = fgl_deg;
      if (!D) {
        u64 p3 = (u64)F.ring()->p * F.ring()->p * F.ring()->p;
        D = (u32)std::min<u64>(F.degree_bound(), p3);
        D = std::max<u32>(D, 2);
      }
      if (D > F.degree_bound())
        throw MalformedInput("fgl: --degree exceeds the file's truncation degree");
      if (*c_ps) {
        emit(json{{"pseries", series_to_json(p_series(F))}}, out_path, format);
        return 0;
      }
      if (*c_ht) {
        auto hr = height(F);
        json j;
        if (hr.exact)
          j["height"] = *hr.exact;
        else
          j["height_at_least"] = hr.lower_bound;
        emit(j, out_path, format);
        return 0;
      }
      if (*c_ws) {
        auto sols = westerland_solve(F, D);
        json arr = json::array();
        for (const auto& s : sols)
          arr.push_back(json{{"f", series_to_json(s.f)}, {"free_degrees", s.free_degrees}});
        emit(json{{"degree", D}, {"solutions", arr}}, out_path, format);
        return 0;
      }
      auto res = detect_gm(F, D);
      json j;
      j["verdict"] = res.verdict;
      if (res.witness) {
        j["witness"] = {{"frobenius_twists", res.witness->n},
                        {"g", series_to_json(res.witness->g)}};
      }
      emit(j, out_path, format);
      return res.iso ? 0 : 1;
    }
    if (*c_hopf) {
      if (*c_xp) {
        if (hn <= hh + 1) {
          std::cerr << "error: verify-xpzero requires n > h + 1\n";
          return 2;
        }
        auto cert = verify_xpzero(hp, hh, hn);
        emit(cert.to_json(), out_path, format);
        return cert.verdict == "VERIFIED" ? 0 : 1;
      }
      if (hh < 1) {
        std::cerr << "error: f0 requires h >= 1\n";
        return 2;
      }
      auto rep = f0_nonnilpotence(hp, hh, hm);
      emit(rep.to_json(), out_path, format);
      return rep.all_nonzero ? 0 : 1;
    }
  } catch (const MalformedInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
