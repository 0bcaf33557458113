#include "pertalg/io.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

namespace pertalg {

namespace {

/* labels are unique per space, so a single lookup table resolves them */
struct LabelTable {
  std::map<std::string, BasisId> ids;

  BasisId resolve(const std::string& lab, const std::string& ctx) const {
    auto it = ids.find(lab);
    if (it == ids.end()) throw IoError(ctx + ": unknown label '" + lab + "'");
    return it->second;
  }
};

std::string position_of(const std::string& text, size_t byte) {
  size_t line = 1, col = 1;
  size_t upto = byte ? byte - 1 : 0;
  if (upto > text.size()) upto = text.size();
  for (size_t i = 0; i < upto; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

void require_keys(const Json& j, std::initializer_list<const char*> allowed,
                  const std::string& ctx) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : allowed)
      if (item.key() == k) ok = true;
    if (!ok) throw IoError(ctx + ": unknown key '" + item.key() + "'");
  }
}

int parse_degree_key(const std::string& k, const std::string& ctx) {
  size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(k, &pos);
  } catch (...) {
    pos = 0;
  }
  if (pos == 0 || pos != k.size())
    throw IoError(ctx + ": degree key '" + k + "' is not an integer");
  return v;
}

GradedSpace parse_space(const Json& j, LabelTable& tbl, const std::string& ctx) {
  if (!j.is_object()) throw IoError(ctx + ": must be an object mapping degrees to label lists");
  GradedSpace sp;
  for (const auto& item : j.items()) {
    int n = parse_degree_key(item.key(), ctx);
    if (!item.value().is_array())
      throw IoError(ctx + ": degree " + item.key() + " must hold an array of labels");
    std::vector<std::string> labels;
    for (const Json& e : item.value()) {
      if (!e.is_string()) throw IoError(ctx + ": labels must be strings");
      std::string lab = e.get<std::string>();
      if (lab.empty()) throw IoError(ctx + ": empty label");
      if (tbl.ids.count(lab)) throw IoError(ctx + ": duplicate label '" + lab + "'");
      tbl.ids[lab] = BasisId{n, static_cast<int>(labels.size())};
      labels.push_back(std::move(lab));
    }
    if (!labels.empty()) sp.basis[n] = std::move(labels);
  }
  return sp;
}

Rat parse_coeff(const Json& e, const std::string& ctx) {
  if (!e.contains("c")) return FieldTraits<Rat>::one();
  const Json& c = e.at("c");
  if (c.is_number_integer()) return FieldTraits<Rat>::from_long(c.get<long>());
  if (c.is_string()) {
    try {
      return rat_from_string(c.get<std::string>());
    } catch (const std::invalid_argument& ex) {
      throw IoError(ctx + ": " + ex.what());
    }
  }
  throw IoError(ctx + ": coefficient must be a string \"p/q\" or an integer");
}

std::string shift_str(int shift) {
  if (shift >= 0) return "+" + std::to_string(shift);
  return std::to_string(shift);
}

/* d, hodge t, hodge s and perturbations are all endomorphism blocks of the
 * primary space, differing only in their degree shift */
GradedMap<Rat> parse_endo(const Json& arr, const GradedSpace& sp, const LabelTable& tbl,
                          int shift, const std::string& what) {
  if (!arr.is_array()) throw IoError(what + ": must be an array of entries");
  GradedMap<Rat> m = GradedMap<Rat>::zero(sp, sp, shift);
  std::map<int, Matrix<Rat>> acc;
  int idx = 0;
  for (const Json& e : arr) {
    ++idx;
    std::string ctx = what + " entry " + std::to_string(idx);
    if (!e.is_object()) throw IoError(ctx + ": must be an object");
    require_keys(e, {"in", "out", "c"}, ctx);
    if (!e.contains("in") || !e.at("in").is_string())
      throw IoError(ctx + ": needs an input label under \"in\"");
    if (!e.contains("out") || !e.at("out").is_string())
      throw IoError(ctx + ": needs an output label under \"out\"");
    BasisId in = tbl.resolve(e.at("in").get<std::string>(), ctx);
    BasisId out = tbl.resolve(e.at("out").get<std::string>(), ctx);
    if (out.deg != in.deg + shift)
      throw IoError(ctx + " (" + e.at("in").get<std::string>() + " -> " +
                    e.at("out").get<std::string>() + "): output degree " +
                    std::to_string(out.deg) + " does not match the " + shift_str(shift) +
                    " shift");
    auto [it, fresh] = acc.try_emplace(in.deg, Matrix<Rat>::zero(sp.dim(out.deg), sp.dim(in.deg)));
    it->second.at(out.idx, in.idx) += parse_coeff(e, ctx);
  }
  for (auto& [n, mat] : acc) m.set_block(n, std::move(mat));
  return m;
}

struct OpEntry {
  int arity = 0;
  Tuple in;
  BasisId out;
  Rat c;
};

/* shared reader for operation entries; slot resolution differs between the
 * algebra and module cases */
template <class Resolve>
std::vector<OpEntry> parse_op_entries(const Json& arr, const std::string& what,
                                      Resolve&& resolve_slot, const LabelTable& out_tbl,
                                      int& cap) {
  if (!arr.is_array()) throw IoError(what + ": must be an array of entries");
  std::vector<OpEntry> out;
  int idx = 0;
  for (const Json& e : arr) {
    ++idx;
    std::string ctx = what + " entry " + std::to_string(idx);
    if (!e.is_object()) throw IoError(ctx + ": must be an object");
    require_keys(e, {"arity", "in", "out", "c"}, ctx);
    if (!e.contains("arity") || !e.at("arity").is_number_integer())
      throw IoError(ctx + ": needs an integer \"arity\"");
    int n = e.at("arity").get<int>();
    if (n < 1) throw IoError(ctx + ": arity must be at least 1");
    if (!e.contains("in") || !e.at("in").is_array())
      throw IoError(ctx + ": needs an array of input labels under \"in\"");
    if (static_cast<int>(e.at("in").size()) != n)
      throw IoError(ctx + ": declares arity " + std::to_string(n) + " but lists " +
                    std::to_string(e.at("in").size()) + " inputs");
    OpEntry oe;
    oe.arity = n;
    int total = 0;
    int slot = 0;
    for (const Json& lab : e.at("in")) {
      if (!lab.is_string()) throw IoError(ctx + ": input labels must be strings");
      BasisId b = resolve_slot(lab.get<std::string>(), slot, n, ctx);
      total += b.deg;
      oe.in.push_back(b);
      ++slot;
    }
    if (!e.contains("out") || !e.at("out").is_string())
      throw IoError(ctx + ": needs an output label under \"out\"");
    oe.out = out_tbl.resolve(e.at("out").get<std::string>(), ctx);
    if (oe.out.deg != total + 2 - n)
      throw IoError(ctx + ": output degree " + std::to_string(oe.out.deg) + " but degree " +
                    std::to_string(total + 2 - n) + " is required by the inputs");
    oe.c = parse_coeff(e, ctx);
    cap = std::max(cap, n);
    out.push_back(std::move(oe));
  }
  return out;
}

AInfStructure<Rat> parse_algebra(const Json& j, const std::string& ctx) {
  require_keys(j, {"kind", "basis", "ops", "hodge", "perturbation"}, ctx);
  LabelTable tbl;
  GradedSpace sp =
      j.contains("basis") ? parse_space(j.at("basis"), tbl, ctx + " basis") : GradedSpace{};
  int cap = 1;
  std::vector<OpEntry> entries;
  if (j.contains("ops")) {
    auto resolve = [&](const std::string& lab, int, int, const std::string& ec) {
      return tbl.resolve(lab, ec);
    };
    entries = parse_op_entries(j.at("ops"), ctx + " operation", resolve, tbl, cap);
  }
  AInfStructure<Rat> plain = AInfStructure<Rat>::make(sp, cap);
  for (const OpEntry& oe : entries) plain.op(oe.arity).add(oe.in, oe.out, oe.c);
  return convert_conventions(plain);
}

struct ParsedModule {
  AInfModuleStructure<Rat> module;
  LabelTable mtbl;
};

ParsedModule parse_module(const Json& j, const std::string& ctx) {
  if (!j.contains("algebra"))
    throw IoError(ctx + ": a module file needs an \"algebra\" object");
  if (!j.at("algebra").is_object()) throw IoError(ctx + ": \"algebra\" must be an object");
  require_keys(j.at("algebra"), {"basis", "ops"}, ctx + " algebra");
  AInfStructure<Rat> alg = parse_algebra(j.at("algebra"), ctx + " algebra");

  LabelTable atbl;
  for (const auto& [n, labels] : alg.space.basis)
    for (size_t i = 0; i < labels.size(); ++i)
      atbl.ids[labels[i]] = BasisId{n, static_cast<int>(i)};

  ParsedModule out;
  GradedSpace msp = j.contains("basis") ? parse_space(j.at("basis"), out.mtbl, ctx + " basis")
                                        : GradedSpace{};
  int cap = 1;
  std::vector<OpEntry> entries;
  if (j.contains("ops")) {
    auto resolve = [&](const std::string& lab, int slot, int arity, const std::string& ec) {
      if (slot + 1 == arity) return out.mtbl.resolve(lab, ec);
      return atbl.resolve(lab, ec);
    };
    entries = parse_op_entries(j.at("ops"), ctx + " operation", resolve, out.mtbl, cap);
  }
  AInfModuleStructure<Rat> plain = AInfModuleStructure<Rat>::make(std::move(alg), msp, cap);
  for (const OpEntry& oe : entries) plain.op(oe.arity).add(oe.in, oe.out, oe.c);
  out.module = convert_conventions(plain);
  return out;
}

}  // namespace

const GradedSpace& ProblemFile::primary_space() const {
  switch (kind) {
    case Kind::Ainf:
      return algebra.space;
    case Kind::Module:
      return module.module_space;
    default:
      return complex.space;
  }
}

ProblemFile parse_problem(const std::string& text, const std::string& origin) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw IoError(origin + ": parse error at " + position_of(text, e.byte));
  }
  if (!j.is_object()) throw IoError(origin + ": top level must be a JSON object");

  std::string kind = "complex";
  if (j.contains("kind")) {
    if (!j.at("kind").is_string()) throw IoError(origin + ": \"kind\" must be a string");
    kind = j.at("kind").get<std::string>();
  }

  ProblemFile p;
  LabelTable primary_tbl;

  if (kind == "complex") {
    require_keys(j, {"kind", "basis", "d", "hodge", "perturbation"}, origin);
    GradedSpace sp = j.contains("basis") ? parse_space(j.at("basis"), primary_tbl, origin + ": basis")
                                         : GradedSpace{};
    GradedMap<Rat> d = j.contains("d")
                           ? parse_endo(j.at("d"), sp, primary_tbl, 1, origin + ": differential")
                           : GradedMap<Rat>::zero(sp, sp, 1);
    p.kind = ProblemFile::Kind::Complex;
    try {
      p.complex = ChainComplex<Rat>::make(std::move(sp), std::move(d));
    } catch (const std::invalid_argument& e) {
      throw IoError(origin + ": " + e.what());
    }
  } else if (kind == "ainf") {
    require_keys(j, {"kind", "basis", "ops", "hodge"}, origin);
    p.kind = ProblemFile::Kind::Ainf;
    p.algebra = parse_algebra(j, origin + ":");
    for (const auto& [n, labels] : p.algebra.space.basis)
      for (size_t i = 0; i < labels.size(); ++i)
        primary_tbl.ids[labels[i]] = BasisId{n, static_cast<int>(i)};
  } else if (kind == "module") {
    require_keys(j, {"kind", "algebra", "basis", "ops", "hodge"}, origin);
    p.kind = ProblemFile::Kind::Module;
    ParsedModule pm = parse_module(j, origin + ":");
    p.module = std::move(pm.module);
    primary_tbl = std::move(pm.mtbl);
  } else {
    throw IoError(origin + ": unknown kind '" + kind + "'");
  }

  if (j.contains("hodge")) {
    const Json& h = j.at("hodge");
    if (!h.is_object()) throw IoError(origin + ": \"hodge\" must be an object");
    require_keys(h, {"t", "s"}, origin + ": hodge");
    if (!h.contains("t") || !h.contains("s"))
      throw IoError(origin + ": a hodge block needs both \"t\" and \"s\"");
    const GradedSpace& sp = p.primary_space();
    HodgeData<Rat> hd;
    hd.t = parse_endo(h.at("t"), sp, primary_tbl, 0, origin + ": hodge t");
    hd.s = parse_endo(h.at("s"), sp, primary_tbl, -1, origin + ": hodge s");
    p.hodge = std::move(hd);
  }

  if (j.contains("perturbation")) {
    if (p.kind != ProblemFile::Kind::Complex)
      throw IoError(origin + ": a perturbation block is only meaningful for a complex");
    p.perturbation = parse_endo(j.at("perturbation"), p.complex.space, primary_tbl, 1,
                                origin + ": perturbation");
  }

  return p;
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError(path + ": cannot read file");
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_problem(buf.str(), path);
}

Json space_json(const GradedSpace& sp) {
  Json out = Json::object();
  for (const auto& [n, labels] : sp.basis)
    if (!labels.empty()) out[std::to_string(n)] = labels;
  return out;
}

Json map_json(const GradedMap<Rat>& m) {
  Json out = Json::array();
  for (int n : m.src.degrees()) {
    if (m.dst.dim(n + m.shift) == 0) continue;
    Matrix<Rat> b = m.block(n);
    for (int j = 0; j < b.cols; ++j)
      for (int i = 0; i < b.rows; ++i) {
        Rat c = b.at(i, j);
        if (c == 0) continue;
        Json e = Json::object();
        e["in"] = label_of(m.src, BasisId{n, j});
        e["out"] = label_of(m.dst, BasisId{n + m.shift, i});
        e["c"] = rat_to_string(c);
        out.push_back(std::move(e));
      }
  }
  return out;
}

namespace {

template <class SlotSpace>
Json entries_json(const std::vector<MultiOp<Rat>>& ops, SlotSpace&& slot_space,
                  const GradedSpace& out_sp) {
  Json out = Json::array();
  for (const MultiOp<Rat>& o : ops)
    for (const auto& [in, val] : o.entries) {
      Json labels = Json::array();
      for (size_t i = 0; i < in.size(); ++i)
        labels.push_back(label_of(slot_space(i, in.size()), in[i]));
      for (const auto& [b, c] : val.terms) {
        Json e = Json::object();
        e["arity"] = o.arity;
        e["in"] = labels;
        e["out"] = label_of(out_sp, b);
        e["c"] = rat_to_string(c);
        out.push_back(std::move(e));
      }
    }
  return out;
}

std::string combo_str(const SparseVec<Rat>& v, const GradedSpace& sp) {
  if (v.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [b, c] : v.terms) {
    Rat a = c;
    bool neg = a < 0;
    if (neg) a = Rat(-a);
    std::string term = label_of(sp, b);
    if (!(a == 1)) term = rat_to_string(a) + "*" + term;
    if (first)
      out += (neg ? "-" : "") + term;
    else
      out += (neg ? " - " : " + ") + term;
    first = false;
  }
  return out;
}

template <class SlotSpace>
std::vector<std::string> display_entries(const std::vector<MultiOp<Rat>>& ops,
                                         SlotSpace&& slot_space, const GradedSpace& out_sp) {
  std::vector<std::string> out;
  for (const MultiOp<Rat>& o : ops)
    for (const auto& [in, val] : o.entries) {
      std::string line = "m_" + std::to_string(o.arity) + "(";
      for (size_t i = 0; i < in.size(); ++i) {
        if (i) line += ",";
        line += label_of(slot_space(i, in.size()), in[i]);
      }
      line += ") = " + combo_str(val, out_sp);
      out.push_back(std::move(line));
    }
  return out;
}

}  // namespace

Json ops_json(const std::vector<MultiOp<Rat>>& ops, const GradedSpace& sp,
              const GradedSpace& out_sp) {
  return entries_json(ops, [&](size_t, size_t) -> const GradedSpace& { return sp; }, out_sp);
}

Json mixed_ops_json(const std::vector<MultiOp<Rat>>& ops, const GradedSpace& alg_sp,
                    const GradedSpace& in_msp, const GradedSpace& out_msp) {
  return entries_json(
      ops,
      [&](size_t i, size_t len) -> const GradedSpace& { return i + 1 == len ? in_msp : alg_sp; },
      out_msp);
}

Json checks_json(const std::vector<IdentityReport>& checks) {
  Json out = Json::array();
  for (const IdentityReport& r : checks) {
    Json e = Json::object();
    e["id"] = r.id;
    e["pass"] = r.pass;
    if (r.cap >= 0) e["cap"] = r.cap;
    if (r.witness) {
      Json w = Json::object();
      w["term"] = r.witness->term;
      w["coeff"] = r.witness->coeff;
      if (r.witness->x_count >= 0) w["x_count"] = r.witness->x_count;
      e["witness"] = std::move(w);
    }
    out.push_back(std::move(e));
  }
  return out;
}

Json complex_problem_json(const ChainComplex<Rat>& c) {
  Json out = Json::object();
  out["kind"] = "complex";
  out["basis"] = space_json(c.space);
  out["d"] = map_json(c.d);
  return out;
}

Json ainf_problem_json(const AInfStructure<Rat>& suspended, const GradedSpace& labels) {
  AInfStructure<Rat> plain = convert_conventions(suspended);
  Json out = Json::object();
  out["kind"] = "ainf";
  out["basis"] = space_json(labels);
  out["ops"] = ops_json(plain.ops, labels, labels);
  return out;
}

Json module_problem_json(const AInfModuleStructure<Rat>& suspended, const GradedSpace& mlabels) {
  AInfModuleStructure<Rat> plain = convert_conventions(suspended);
  AInfStructure<Rat> alg_plain = convert_conventions(suspended.algebra);
  Json alg = Json::object();
  alg["basis"] = space_json(alg_plain.space);
  alg["ops"] = ops_json(alg_plain.ops, alg_plain.space, alg_plain.space);
  Json out = Json::object();
  out["kind"] = "module";
  out["algebra"] = std::move(alg);
  out["basis"] = space_json(mlabels);
  out["ops"] = mixed_ops_json(plain.ops, alg_plain.space, mlabels, mlabels);
  return out;
}

GradedSpace display_space(const GradedSpace& tspace, const GradedMap<Rat>& embed,
                          const GradedSpace& original) {
  GradedSpace out;
  std::set<std::string> used;
  for (const auto& [n, labels] : tspace.basis) {
    Matrix<Rat> b = embed.block(n);
    std::vector<std::string> row;
    for (int j = 0; j < static_cast<int>(labels.size()); ++j) {
      std::string lab = "h" + std::to_string(n) + "_" + std::to_string(j);
      int hits = 0, hit_row = -1;
      for (int i = 0; i < b.rows; ++i)
        if (!(b.at(i, j) == 0)) {
          ++hits;
          hit_row = i;
        }
      if (hits == 1 && b.at(hit_row, j) == 1) {
        std::string cand = label_of(original, BasisId{n, hit_row});
        if (!used.count(cand)) lab = cand;
      }
      used.insert(lab);
      row.push_back(std::move(lab));
    }
    if (!row.empty()) out.basis[n] = std::move(row);
  }
  return out;
}

std::vector<std::string> display_ops(const std::vector<MultiOp<Rat>>& plain_ops,
                                     const GradedSpace& sp, const GradedSpace& out_sp) {
  return display_entries(plain_ops, [&](size_t, size_t) -> const GradedSpace& { return sp; },
                         out_sp);
}

std::vector<std::string> display_mixed_ops(const std::vector<MultiOp<Rat>>& plain_ops,
                                           const GradedSpace& alg_sp, const GradedSpace& in_msp,
                                           const GradedSpace& out_msp) {
  return display_entries(
      plain_ops,
      [&](size_t i, size_t len) -> const GradedSpace& { return i + 1 == len ? in_msp : alg_sp; },
      out_msp);
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

void write_text(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError(path + ": cannot open for writing");
  f << text;
  f.flush();
  if (!f.good()) throw IoError(path + ": write failed");
}

}  // namespace pertalg
