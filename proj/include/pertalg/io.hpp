#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "pertalg/ainf.hpp"
#include "pertalg/ainf_module.hpp"
#include "pertalg/complex.hpp"
#include "pertalg/report.hpp"
#include "pertalg/scalar.hpp"

namespace pertalg {

using Json = nlohmann::ordered_json;

struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/* In-memory model of a problem file.  Files and reports carry operations in
 * the classical convention; the loaded structures are stored in the library's
 * suspended convention, converting on the way in and out. */
struct ProblemFile {
  enum class Kind { Complex, Ainf, Module };

  Kind kind = Kind::Complex;
  ChainComplex<Rat> complex;        // Kind::Complex
  AInfStructure<Rat> algebra;       // Kind::Ainf
  AInfModuleStructure<Rat> module;  // Kind::Module
  std::optional<HodgeData<Rat>> hodge;         // splits the primary space
  std::optional<GradedMap<Rat>> perturbation;  // Kind::Complex only

  const GradedSpace& primary_space() const;
};

/* Reading.  Both throw IoError: parse errors with line and column, semantic
 * errors naming the offending label or entry. */
ProblemFile load_problem(const std::string& path);
ProblemFile parse_problem(const std::string& text, const std::string& origin);

/* Writing.  Sparse entry lists in the classical convention, canonical
 * rational strings, fixed key order; serializing the same data twice gives
 * identical bytes. */
Json space_json(const GradedSpace& sp);
Json map_json(const GradedMap<Rat>& m);

/* Uniform slots: every input label lives in sp.  Covers algebra operations
 * and algebra morphism components. */
Json ops_json(const std::vector<MultiOp<Rat>>& ops, const GradedSpace& sp,
              const GradedSpace& out_sp);

/* Mixed slots: leading labels in alg_sp, the trailing one in in_msp. */
Json mixed_ops_json(const std::vector<MultiOp<Rat>>& ops, const GradedSpace& alg_sp,
                    const GradedSpace& in_msp, const GradedSpace& out_msp);

Json checks_json(const std::vector<IdentityReport>& checks);

/* Self-contained problem objects, loadable by parse_problem. */
Json complex_problem_json(const ChainComplex<Rat>& c);
Json ainf_problem_json(const AInfStructure<Rat>& suspended, const GradedSpace& labels);
Json module_problem_json(const AInfModuleStructure<Rat>& suspended, const GradedSpace& mlabels);

/* Relabel harmonic generators by the original basis vector whenever the
 * embedding column is a plain unit vector, so transferred operations read in
 * the input's own names. */
GradedSpace display_space(const GradedSpace& tspace, const GradedMap<Rat>& embed,
                          const GradedSpace& original);

/* Human-readable lines like "m_3(u,v,u) = -wu", one per stored value. */
std::vector<std::string> display_ops(const std::vector<MultiOp<Rat>>& plain_ops,
                                     const GradedSpace& sp, const GradedSpace& out_sp);
std::vector<std::string> display_mixed_ops(const std::vector<MultiOp<Rat>>& plain_ops,
                                           const GradedSpace& alg_sp, const GradedSpace& in_msp,
                                           const GradedSpace& out_msp);

std::string dump_json(const Json& j);

/* Empty path writes to stdout. */
void write_text(const std::string& text, const std::string& path);

}  // namespace pertalg
