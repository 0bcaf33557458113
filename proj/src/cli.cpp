#include "pertalg/cli.hpp"

#include <chrono>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pertalg/ainf.hpp"
#include "pertalg/ainf_module.hpp"
#include "pertalg/catalog.hpp"
#include "pertalg/io.hpp"
#include "pertalg/perturb.hpp"

namespace pertalg {

namespace {

struct CommandResult {
  Json payload = Json::object();
  std::vector<IdentityReport> checks;
  std::string summary;
};

std::string join_args(const std::vector<std::string>& args) {
  std::string out;
  for (size_t i = 0; i < args.size(); ++i) {
    if (i) out += " ";
    out += args[i];
  }
  return out;
}

std::string counted(const std::vector<IdentityReport>& cs, const std::string& noun) {
  int pass = 0;
  for (const auto& r : cs)
    if (r.pass) ++pass;
  return std::to_string(pass) + "/" + std::to_string(cs.size()) + " " + noun + " passed";
}

void append_prefixed(std::vector<IdentityReport>& dst, std::vector<IdentityReport> src,
                     const std::string& prefix) {
  for (auto& r : src) {
    r.id = prefix + r.id;
    dst.push_back(std::move(r));
  }
}

ProblemFile load_as(const std::string& path, ProblemFile::Kind kind, const std::string& cmd) {
  ProblemFile p = load_problem(path);
  if (p.kind != kind) {
    const char* need = kind == ProblemFile::Kind::Complex ? "complex"
                       : kind == ProblemFile::Kind::Ainf  ? "ainf"
                                                          : "module";
    throw IoError(path + ": the " + cmd + " command needs a file of kind \"" + need + "\"");
  }
  return p;
}

ChainComplex<Rat> underlying_complex(const ProblemFile& p) {
  switch (p.kind) {
    case ProblemFile::Kind::Ainf:
      return ChainComplex<Rat>::make(p.algebra.space,
                                     map_from_op(p.algebra.space, *p.algebra.find_op(1), 1));
    case ProblemFile::Kind::Module:
      return ChainComplex<Rat>::make(p.module.module_space,
                                     map_from_op(p.module.module_space, *p.module.find_op(1), 1));
    default:
      return p.complex;
  }
}

HodgeData<Rat> hodge_for(const ProblemFile& p, const ChainComplex<Rat>& c) {
  if (p.hodge) return *p.hodge;
  return build_hodge(c);
}

GradedMap<Rat> relabelled(GradedMap<Rat> m, const GradedSpace* src, const GradedSpace* dst) {
  if (src) m.src = *src;
  if (dst) m.dst = *dst;
  return m;
}

CommandResult do_verify_algebra(int cap) {
  CommandResult res;
  res.checks = verify_catalog<Rat>(cap);
  res.payload["cap"] = cap;
  res.summary = "verify-algebra: " + counted(res.checks, "identities");
  return res;
}

CommandResult do_hodge(const std::string& file) {
  ProblemFile p = load_as(file, ProblemFile::Kind::Complex, "hodge");
  const ChainComplex<Rat>& c = p.complex;
  HodgeData<Rat> hd = hodge_for(p, c);

  CommandResult res;
  res.checks = verify_hodge(c, hd);
  Json hj = Json::object();
  hj["t"] = map_json(hd.t);
  hj["s"] = map_json(hd.s);
  res.payload["hodge"] = std::move(hj);
  Json dims = Json::object();
  for (const auto& [n, d] : homology_dims(c)) dims[std::to_string(n)] = d;
  res.payload["homology"] = std::move(dims);

  if (p.perturbation) {
    try {
      Perturbation<Rat> pe = make_perturbation(c, hd, *p.perturbation);
      TransferredData<Rat> td = transferred_structure(c, hd, pe);
      GaugeData<Rat> g = gauge_conjugation(c, hd, pe);
      for (auto& r : td.checks) res.checks.push_back(std::move(r));
      for (auto& r : g.checks) res.checks.push_back(std::move(r));

      GradedSpace disp = display_space(td.tspace, td.embed, c.space);
      Json sub = Json::object();
      sub["kind"] = "complex";
      sub["basis"] = space_json(disp);
      sub["d"] = map_json(relabelled(td.xi_t, &disp, &disp));
      res.payload["structure"] = std::move(sub);
      res.payload["incl"] = map_json(relabelled(td.incl, &disp, nullptr));
      res.payload["proj"] = map_json(relabelled(td.proj, nullptr, &disp));
    } catch (const PerturbationError& e) {
      IdentityReport r;
      r.id = "PERTURBATION";
      r.pass = false;
      Witness w;
      w.term = e.what();
      r.witness = std::move(w);
      res.checks.push_back(std::move(r));
    }
  }

  res.summary = "hodge: " + counted(res.checks, "identities");
  return res;
}

CommandResult do_transfer(const std::string& file, int cap, bool with_morphisms,
                          const std::string& cmd) {
  ProblemFile p = load_as(file, ProblemFile::Kind::Ainf, cmd);
  ChainComplex<Rat> c = underlying_complex(p);
  HodgeData<Rat> hd = hodge_for(p, c);
  TransferredAinf<Rat> tr = transfer_minimal(p.algebra, hd, cap);
  GradedSpace disp = display_space(tr.tspace, tr.embed, p.algebra.space);

  CommandResult res;
  append_prefixed(res.checks, codifferential_check(tr.minimal, cap), "MINIMAL-");
  if (with_morphisms) {
    append_prefixed(res.checks, morphism_check(tr.minimal, p.algebra, tr.incl, cap), "INCL-");
    append_prefixed(res.checks, morphism_check(p.algebra, tr.minimal, tr.proj, cap), "PROJ-");
  }

  res.payload["tspace"] = space_json(disp);
  res.payload["embed"] = map_json(relabelled(tr.embed, &disp, nullptr));
  res.payload["structure"] = ainf_problem_json(tr.minimal, disp);
  if (with_morphisms) {
    res.payload["incl"] = ops_json(tr.incl.comps, disp, p.algebra.space);
    res.payload["proj"] = ops_json(tr.proj.comps, p.algebra.space, disp);
  }
  res.payload["display"] = display_ops(convert_conventions(tr.minimal).ops, disp, disp);
  res.summary = cmd + ": " + counted(res.checks, "identities");
  return res;
}

CommandResult do_split(const std::string& file, int cap) {
  ProblemFile p = load_as(file, ProblemFile::Kind::Ainf, "split");
  ChainComplex<Rat> c = underlying_complex(p);
  HodgeData<Rat> hd = hodge_for(p, c);
  DecompositionData<Rat> dec = decomposition(p.algebra, hd, cap);

  CommandResult res;
  res.checks = dec.checks;
  const GradedSpace& sp = p.algebra.space;
  res.payload["structure"] = ainf_problem_json(dec.m_check, sp);
  res.payload["iso"] = ops_json(dec.iso.comps, sp, sp);
  res.payload["display"] = display_ops(convert_conventions(dec.m_check).ops, sp, sp);
  res.summary = "split: " + counted(res.checks, "identities");
  return res;
}

CommandResult do_module_transfer(const std::string& file, int cap) {
  ProblemFile p = load_as(file, ProblemFile::Kind::Module, "module-transfer");
  ChainComplex<Rat> c = underlying_complex(p);
  HodgeData<Rat> hd = hodge_for(p, c);
  ModuleTransfer<Rat> tr = transfer_module(p.module, hd, cap);
  GradedSpace disp = display_space(tr.tspace, tr.embed, p.module.module_space);
  const GradedSpace& asp = p.module.algebra.space;
  const GradedSpace& msp = p.module.module_space;

  CommandResult res;
  res.checks = tr.checks;
  res.payload["tspace"] = space_json(disp);
  res.payload["embed"] = map_json(relabelled(tr.embed, &disp, nullptr));
  res.payload["structure"] = module_problem_json(tr.minimal, disp);
  res.payload["split"] = module_problem_json(tr.split, msp);
  res.payload["iso"] = mixed_ops_json(tr.iso, asp, msp, msp);
  res.payload["display"] = display_mixed_ops(convert_conventions(tr.minimal).ops, asp, disp, disp);
  res.summary = "module-transfer: " + counted(res.checks, "identities");
  return res;
}

CommandResult do_trees(int arity) {
  std::vector<AdmissibleTree> trees = enumerate_admissible_trees(arity);
  CommandResult res;
  res.payload["arity"] = arity;
  res.payload["count"] = trees.size();
  Json arr = Json::array();
  for (const AdmissibleTree& t : trees) {
    Json parts = Json::array();
    for (int pp : t.parts) parts.push_back(pp);
    arr.push_back(std::move(parts));
  }
  res.payload["trees"] = std::move(arr);
  res.summary = "trees: " + std::to_string(trees.size()) + " admissible trees of arity " +
                std::to_string(arity);
  return res;
}

}  // namespace

int run_command(const std::vector<std::string>& args) {
  CLI::App app{"exact transfer of homotopy algebraic structure"};
  app.name(kToolName);
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  int va_cap = 6;
  std::string va_out;
  CLI::App* c_va = app.add_subcommand("verify-algebra", "check the operator identity catalog");
  c_va->add_option("--cap", va_cap, "highest x power checked")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  c_va->add_option("--out", va_out, "write the report to this file");

  std::string h_file, h_out;
  CLI::App* c_h = app.add_subcommand(
      "hodge", "build or verify a splitting; transfer along a perturbation when present");
  c_h->add_option("file", h_file, "problem file of kind complex")->required();
  c_h->add_option("--out", h_out, "write the report to this file");

  struct FileCmd {
    std::string file;
    int cap = 4;
    std::string out;
  };
  auto add_file_cmd = [&](const char* cname, const char* help, const char* fhelp) {
    auto fc = std::make_shared<FileCmd>();
    CLI::App* c = app.add_subcommand(cname, help);
    c->add_option("file", fc->file, fhelp)->required();
    c->add_option("--cap", fc->cap, "highest arity computed")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    c->add_option("--out", fc->out, "write the report to this file");
    return std::make_pair(c, fc);
  };
  auto [c_tr, tr_a] = add_file_cmd("transfer", "minimal structure with both connecting morphisms",
                                   "problem file of kind ainf");
  auto [c_min, min_a] =
      add_file_cmd("minimal", "minimal structure on the harmonic generators",
                   "problem file of kind ainf");
  auto [c_sp, sp_a] = add_file_cmd(
      "split", "decompose into the minimal part and a contractible one", "problem file of kind ainf");
  auto [c_mt, mt_a] = add_file_cmd("module-transfer", "minimal module structure over the algebra",
                                   "problem file of kind module");

  int t_arity = 0;
  std::string t_out;
  CLI::App* c_t = app.add_subcommand("trees", "list the admissible trees of one arity");
  c_t->add_option("--arity", t_arity, "number of leaves")->required();
  c_t->add_option("--out", t_out, "write the report to this file");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  auto t0 = std::chrono::steady_clock::now();
  CommandResult res;
  std::string out_path;
  try {
    if (c_va->parsed()) {
      res = do_verify_algebra(va_cap);
      out_path = va_out;
    } else if (c_h->parsed()) {
      res = do_hodge(h_file);
      out_path = h_out;
    } else if (c_tr->parsed()) {
      res = do_transfer(tr_a->file, tr_a->cap, true, "transfer");
      out_path = tr_a->out;
    } else if (c_min->parsed()) {
      res = do_transfer(min_a->file, min_a->cap, false, "minimal");
      out_path = min_a->out;
    } else if (c_sp->parsed()) {
      res = do_split(sp_a->file, sp_a->cap);
      out_path = sp_a->out;
    } else if (c_mt->parsed()) {
      res = do_module_transfer(mt_a->file, mt_a->cap);
      out_path = mt_a->out;
    } else if (c_t->parsed()) {
      res = do_trees(t_arity);
      out_path = t_out;
    }

    Json rep = Json::object();
    rep["tool"] = kToolName;
    rep["version"] = kToolVersion;
    rep["command"] = join_args(args);
    rep["checks"] = checks_json(res.checks);
    for (auto& item : res.payload.items()) rep[item.key()] = std::move(item.value());
    write_text(dump_json(rep), out_path);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  for (const auto& r : res.checks)
    if (!r.pass) {
      std::cerr << "FAIL " << r.id;
      if (r.witness) std::cerr << ": " << r.witness->term;
      std::cerr << "\n";
    }
  auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0);
  std::cerr << res.summary << " [" << std::fixed << std::setprecision(1) << ms.count() << " ms]\n";
  return all_pass(res.checks) ? 0 : 1;
}

}  // namespace pertalg
