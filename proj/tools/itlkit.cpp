// Command-line front end.
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "itlkit/decide.hpp"
#include "itlkit/io.hpp"
#include "itlkit/proofs.hpp"
#include "itlkit/unwind.hpp"
#include "json.hpp"

using namespace itlkit;
using json = nlohmann::json;

namespace {

constexpr int kOk = 0, kRefuted = 1, kCapacity = 2, kInput = 3;

std::string join(const std::vector<std::string>& xs, const std::string& sep = ", ") {
  std::string out;
  for (const auto& x : xs) out += (out.empty() ? "" : sep) + x;
  return out;
}

std::string world_list(const Bits& b) {
  std::vector<std::string> xs;
  for (size_t w : b.members()) xs.push_back(std::to_string(w));
  return "{" + join(xs) + "}";
}

json violations_json(const std::vector<Violation>& vs) {
  json a = json::array();
  for (const auto& v : vs) a.push_back({{"kind", v.kind}, {"detail", v.detail}});
  return a;
}

std::string profile_string(const UniversalProfile& p, const TypeSpace& sp) {
  return "(" + join(sp.names(p.pos)) + "; " + join(sp.names(p.neg)) + ")";
}

QFlags parse_flags(const std::string& s) {
  QFlags f;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "full") f.full = true;
    else if (item == "honest") f.honest = true;
    else if (item == "deterministic") f.deterministic = true;
    else if (!item.empty() && item != "none") throw std::invalid_argument("unknown flag " + item);
  }
  return f;
}

int cmd_decide(const std::string& formula, const std::string& file, const std::string& mode,
               const std::string& cert, unsigned threads, bool as_json) {
  std::string text = formula;
  if (!file.empty()) text = read_file(file);
  Formula f = parse(text);
  Mode m = mode == "sat" ? Mode::Satisfiability : Mode::Validity;
  DecideOptions opt;
  opt.threads = threads;
  Verdict v = decide(f, m, opt);
  auto sp = TypeSpace::of(f);
  bool good = v.status == Status::Valid || v.status == Status::Satisfiable;
  if (v.certificate && !cert.empty()) write_file(cert, quasimodel_to_json(*v.certificate, render(f)));
  if (as_json) {
    json j{{"formula", render(f)}, {"mode", mode}, {"status", to_string(v.status)}};
    if (v.profile) j["profile"] = profile_string(*v.profile, *sp);
    j["profiles"] = json::array();
    for (const auto& r : v.reports)
      j["profiles"].push_back({{"profile", profile_string(r.profile, *sp)},
                               {"types", r.types},
                               {"moments", r.moments},
                               {"rounds", r.rounds},
                               {"survivors", r.survivors},
                               {"honest", r.honest}});
    if (v.certificate) j["certificate"] = json::parse(quasimodel_to_json(*v.certificate, render(f)));
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << to_string(v.status) << "\n";
    if (v.profile) std::cout << "profile: " << profile_string(*v.profile, *sp) << "\n";
    for (const auto& r : v.reports) {
      std::vector<std::string> rs;
      for (size_t x : r.rounds) rs.push_back(std::to_string(x));
      std::cout << "  profile " << profile_string(r.profile, *sp) << ": types " << r.types
                << ", moments " << r.moments << ", survivors per round [" << join(rs) << "]\n";
    }
    if (v.certificate) {
      std::cout << "certificate: " << v.certificate->n << " worlds, designated "
                << *v.certificate->designated;
      if (!cert.empty()) std::cout << ", written to " << cert;
      std::cout << "\n";
    }
  }
  return good ? kOk : kRefuted;
}

int cmd_check_model(const std::string& model_file, const std::string& formula, bool classical,
                    bool translate, bool as_json) {
  Formula f = parse(formula);
  std::string text = read_file(model_file);
  ClassicalModel cm = classical_model_from_json(text);
  auto frame_bad = validate_frame(cm.n, cm.up, cm.step);
  PosetModel pm;
  pm.n = cm.n;
  pm.up = cm.up;
  pm.step = cm.step;
  for (const auto& [v, b] : cm.cval) pm.val[v] = classical ? interior(cm.up, b) : b;
  auto bad = frame_bad.empty() ? validate_model(pm) : frame_bad;
  if (!bad.empty()) {
    std::cerr << "invalid model:\n";
    for (const auto& b : bad) std::cerr << "  " << b << "\n";
    return kInput;
  }
  for (const auto& v : variables(f))
    if (!pm.val.count(v)) pm.val[v] = Bits(pm.n);
  Bits sat = evaluate(pm, f);
  bool valid = sat.all();
  json j{{"formula", render(f)}, {"worlds", sat.members()}, {"valid", valid}};
  std::optional<bool> agree;
  if (translate) {
    ClassicalFormula g = gt_translate(f);
    if (!classical) cm.cval = pm.val;
    for (const auto& v : variables(f))
      if (!cm.cval.count(v)) cm.cval[v] = Bits(cm.n);
    Bits cs = classical_evaluate(cm, g);
    agree = cs == sat;
    j["translation"] = render(g);
    j["classical_worlds"] = cs.members();
    j["agreement"] = *agree;
  }
  if (as_json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "[[" << render(f) << "]] = " << world_list(sat) << "\n";
    std::cout << "valid on model: " << (valid ? "yes" : "no") << "\n";
    if (agree) std::cout << "translation: " << render(gt_translate(f)) << "\nagreement: "
                         << (*agree ? "yes" : "no") << "\n";
  }
  if (agree && !*agree) return kRefuted;
  return valid ? kOk : kRefuted;
}

int cmd_prove(const std::string& script, const std::string& logic, bool as_json) {
  ProofScript s = parse_script(read_file(script));
  Logic l = logic.empty() ? s.logic.value_or(Logic::ITL0DA) : parse_logic(logic);
  ProofReport r = check_proof(s, l);
  if (as_json) {
    json j{{"logic", to_string(l)}, {"accepted", r.accepted}, {"lines", r.notes}};
    if (r.bad_line) j["bad_line"] = *r.bad_line;
    if (!r.message.empty()) j["message"] = r.message;
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& n : r.notes) std::cout << n << "\n";
    std::cout << (r.accepted ? "accepted" : "rejected: " + r.message) << " (" << to_string(l)
              << ")\n";
  }
  return r.accepted ? kOk : kRefuted;
}

int cmd_unwind(const std::string& cert, size_t maxlen, const std::string& dot,
               const std::string& out, bool as_json) {
  Quasimodel q = quasimodel_from_json(read_file(cert));
  auto pre = validate_quasimodel(q, {true, false, false});
  if (!pre.empty()) {
    std::cerr << "certificate is not a full quasimodel:\n" << describe(pre);
    return kInput;
  }
  Quasimodel r = forall_free_reduct(q);
  size_t longest = 0;
  for (size_t w = 0; w < r.n; ++w)
    longest = std::max(longest, extend_to_terminal(r, {{w, r.label[w]}}).size());
  Fragment fr = limit_fragment(r, maxlen);
  auto bad = validate_fragment(fr);
  if (!dot.empty()) write_file(dot, to_dot(fr));
  if (!out.empty()) write_file(out, fragment_to_json(fr));
  if (as_json) {
    std::cout << json{{"worlds", fr.size()},
                      {"terminal_paths", fr.size() - 1},
                      {"longest_extension", longest},
                      {"violations", violations_json(bad)}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << "fragment: " << fr.size() << " worlds (empty path + " << fr.size() - 1
              << " terminal paths of length <= " << maxlen << ")\n";
    std::cout << "every world extends to a terminal path; longest " << longest << "\n";
    std::cout << "defect revocation: unchecked at this bound\n";
    if (bad.empty()) std::cout << "fragment checks: ok\n";
    else std::cout << describe(bad);
  }
  return bad.empty() ? kOk : kRefuted;
}

int cmd_validate(const std::string& cert, const std::string& flags, bool as_json) {
  Quasimodel q = quasimodel_from_json(read_file(cert));
  QFlags f = parse_flags(flags);
  auto bad = validate_quasimodel(q, f);
  if (as_json) {
    std::cout << json{{"worlds", q.n}, {"violations", violations_json(bad)}}.dump(2) << "\n";
  } else if (bad.empty()) {
    std::cout << "ok: " << q.n << " worlds, no violations\n";
  } else {
    std::cout << describe(bad);
  }
  return bad.empty() ? kOk : kRefuted;
}

int cmd_translate(const std::string& formula, bool as_json) {
  Formula f = parse(formula);
  ClassicalFormula g = gt_translate(f);
  if (as_json)
    std::cout << json{{"formula", render(f)}, {"translation", render(g)},
                      {"size", surface_size(g)}}
                     .dump(2)
              << "\n";
  else
    std::cout << render(g) << "\n";
  return kOk;
}

int cmd_parse(const std::string& formula, bool as_json) {
  Formula f = parse(formula);
  Signature s = closure(f);
  std::vector<std::string> sig;
  for (auto g : s.formulas()) sig.push_back(render(g));
  if (as_json)
    std::cout << json{{"formula", render(f)}, {"size", f.size()}, {"depth", f.depth()},
                      {"signature", sig}}
                     .dump(2)
              << "\n";
  else
    std::cout << render(f) << "\nsize " << f.size() << ", depth " << f.depth()
              << ", signature " << s.size() << ": " << join(sig, " , ") << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Intuitionistic temporal logic toolkit"};
  app.require_subcommand(1);
  bool as_json = false;
  size_t max_sig = 0;
  app.add_flag("--json", as_json, "Machine-readable output");
  app.add_option("--max-signature", max_sig, "Signature size cap (overrides ITLKIT_MAX_SIG)");

  std::string formula, file, mode = "valid", cert, model, script, logic, dot, out, flags = "full,honest";
  unsigned threads = 1;
  size_t maxlen = 4;
  bool classical = false, translate = false;

  auto* dec = app.add_subcommand("decide", "Decide validity or satisfiability");
  dec->add_option("-f,--formula", formula, "Formula");
  dec->add_option("--file", file, "Read the formula from a file");
  dec->add_option("--mode", mode, "valid or sat")->check(CLI::IsMember({"valid", "sat"}));
  dec->add_option("--certificate", cert, "Write the certificate here");
  dec->add_option("--profile-parallel", threads, "Profiles decided concurrently");
  dec->add_option("--max-signature", max_sig, "Signature size cap");
  dec->add_flag("--json", as_json, "Machine-readable output");

  auto* chk = app.add_subcommand("check-model", "Evaluate a formula on a model file");
  chk->add_option("--model", model, "Model JSON")->required();
  chk->add_option("-f,--formula", formula, "Formula")->required();
  chk->add_flag("--classical", classical, "Valuation is classical; use its interior");
  chk->add_flag("--translate", translate, "Also evaluate the translation classically");
  chk->add_flag("--json", as_json, "Machine-readable output");

  auto* prv = app.add_subcommand("prove", "Check a proof script");
  prv->add_option("--script", script, "Proof script")->required();
  prv->add_option("--logic", logic, "ITL0, ITLFS, ITL0D, ITLFSD, ITL0A or ITL0DA");
  prv->add_flag("--json", as_json, "Machine-readable output");

  auto* unw = app.add_subcommand("unwind", "Terminal paths and a bounded limit fragment");
  unw->add_option("--certificate", cert, "Quasimodel JSON")->required();
  unw->add_option("--maxlen", maxlen, "Longest path kept");
  unw->add_option("--dot", dot, "Write the fragment as DOT");
  unw->add_option("--out", out, "Write the fragment as JSON");
  unw->add_flag("--json", as_json, "Machine-readable output");

  auto* val = app.add_subcommand("validate", "Validate a quasimodel file");
  val->add_option("--certificate", cert, "Quasimodel JSON")->required();
  val->add_option("--flags", flags, "Comma list of full, honest, deterministic");
  val->add_flag("--json", as_json, "Machine-readable output");

  auto* tr = app.add_subcommand("translate", "Translate into the classical language");
  tr->add_option("-f,--formula", formula, "Formula")->required();
  tr->add_flag("--json", as_json, "Machine-readable output");

  auto* ps = app.add_subcommand("parse", "Parse and print a formula");
  ps->add_option("-f,--formula", formula, "Formula")->required();
  ps->add_flag("--json", as_json, "Machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kInput;
  }
  if (max_sig) set_max_signature(max_sig);
  try {
    if (*dec) {
      if (formula.empty() == file.empty()) {
        std::cerr << "give exactly one of --formula and --file\n";
        return kInput;
      }
      return cmd_decide(formula, file, mode, cert, threads, as_json);
    }
    if (*chk) return cmd_check_model(model, formula, classical, translate, as_json);
    if (*prv) return cmd_prove(script, logic, as_json);
    if (*unw) return cmd_unwind(cert, maxlen, dot, out, as_json);
    if (*val) return cmd_validate(cert, flags, as_json);
    if (*tr) return cmd_translate(formula, as_json);
    if (*ps) return cmd_parse(formula, as_json);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kInput;
  } catch (const CapacityError& e) {
    std::cerr << "capacity: " << e.what() << "\n";
    return kCapacity;
  } catch (const FormatError& e) {
    std::cerr << e.what() << "\n";
    return kInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRefuted;
  }
  return kInput;
}
