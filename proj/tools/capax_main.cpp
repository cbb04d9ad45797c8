#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "capax/model_io.hpp"

namespace {

using namespace capax;

constexpr int kExitOk = 0;
constexpr int kExitContradiction = 1;
constexpr int kExitInvalidModel = 2;
constexpr int kExitUsage = 3;

std::uint64_t guard_from_env() {
  const char* raw = std::getenv("CAPAX_SIZE_GUARD");
  if (raw == nullptr || *raw == '\0') return kDefaultJointGuard;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (end == raw || *end != '\0' || v == 0)
    throw ExpressionError(std::string("CAPAX_SIZE_GUARD is not a positive integer: '") +
                              raw + "'",
                          0);
  return static_cast<std::uint64_t>(v);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open model file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string scope_str(const Space& space, const Scope& scope) {
  std::string out = "{";
  for (std::size_t i = 0; i < scope.ids().size(); ++i) {
    if (i > 0) out += ",";
    out += space.var(scope.ids()[i]).name;
  }
  return out + "}";
}

void print_interval_line(const std::string& expr, const Interval& iv) {
  std::printf("%s lower=%.9f upper=%.9f status=%s\n", expr.c_str(), iv.lower, iv.upper,
              status_name(iv.status).c_str());
}

Scope joint_scope(const Space& space) {
  std::vector<VarId> ids(space.size());
  std::iota(ids.begin(), ids.end(), 0);
  return Scope(std::move(ids));
}

/// Conjunction of the findings as one full-scope event.
Event combined_evidence(const Space& space, const Scope& full,
                        const std::vector<Event>& findings) {
  Event e = full_event(space, full);
  for (const Event& f : findings)
    e.configs = e.configs.intersect(extend(space, f, full).configs);
  return e;
}

int run_validate(const std::string& file, bool deep) {
  const std::uint64_t guard = guard_from_env();
  Model model = parse_model(read_file(file), guard);
  const Space& space = model.space();
  const auto non_empty = [](const JunctionTree& t) {
    return t.node_count() - (t.empty_node ? 1 : 0);
  };
  std::printf("ok: %zu variables; mass tree %zu cliques; commonality tree %zu cliques\n",
              space.size(), non_empty(model.m_tree()), non_empty(model.q_tree()));
  if (!deep) return kExitOk;

  const FlatJoint flat = assemble_joint(model, guard);
  std::printf("joint mass total: %.9f\n", flat.m_joint.total());
  std::printf("dual consistency: max gap %.9f\n", flat.max_dual_gap);

  const MarkovReport report = check_markov(model, guard);
  std::printf("rectangular core: %s\n", report.rectangular_core_ok ? "ok" : "violated");
  for (const auto& d : report.m_factorizations)
    std::printf("mass factorization %s|%s over %s: %s gap %.9f\n",
                scope_str(space, d.left).c_str(), scope_str(space, d.right).c_str(),
                scope_str(space, d.separator).c_str(), d.ok ? "ok" : "violated",
                d.max_gap);
  for (const auto& d : report.q_factorizations)
    std::printf("commonality factorization %s|%s over %s: %s gap %.9f\n",
                scope_str(space, d.left).c_str(), scope_str(space, d.right).c_str(),
                scope_str(space, d.separator).c_str(), d.ok ? "ok" : "violated",
                d.max_gap);
  for (const auto& s : report.separator_partitions)
    std::printf("separator partition %s: %s\n", scope_str(space, s.separator).c_str(),
                s.partitions ? "yes" : "no");

  const SetFunction prior_lower = inverse_mobius(flat.m_joint);
  if (prior_lower.configs() <= 12) {
    const TwoMonotoneReport tm = check_two_monotone(prior_lower, 12);
    std::printf("two-monotone: %s\n", tm.pass ? "ok" : "violated");
    if (!tm.pass)
      std::fprintf(stderr,
                   "warning: the prior is not 2-monotone (%s); conditional bounds "
                   "may not be exact\n",
                   tm.violations.empty() ? "no detail" : tm.violations.front().c_str());
  } else {
    std::printf("two-monotone: skipped (size guard)\n");
  }

  if (!report.all_ok()) {
    for (const auto& note : report.notes)
      std::fprintf(stderr, "error: %s\n", note.c_str());
    std::fprintf(stderr, "error: the prior is not Markov for the declared structure\n");
    return kExitInvalidModel;
  }
  return kExitOk;
}

int run_query(const std::string& file, const std::vector<std::string>& evidence_raw,
              const std::vector<std::string>& target_raw, bool deep_check) {
  const std::uint64_t guard = guard_from_env();
  const std::string text = read_file(file);
  Model model = parse_model(text, guard);
  const Space& space = model.space();

  std::optional<FlatJoint> flat;
  if (deep_check) flat = assemble_joint(model, guard);

  std::vector<Event> findings;
  for (const std::string& raw : evidence_raw) {
    Event e = parse_event(space, raw);
    model.enter_evidence(e);
    findings.push_back(std::move(e));
  }
  model.propagate();

  std::vector<Interval> results;
  for (const std::string& raw : target_raw) {
    const Interval iv = model.query_posterior(parse_event(space, raw));
    print_interval_line(raw, iv);
    results.push_back(iv);
  }

  if (deep_check) {
    const Scope full = joint_scope(space);
    const Event e_full = combined_evidence(space, full, findings);
    for (std::size_t i = 0; i < target_raw.size(); ++i) {
      const Event t_full = extend(space, parse_event(space, target_raw[i]), full);
      const Interval ref = flat_posterior(space, *flat, t_full, e_full);
      const Interval& got = results[i];
      const bool status_ok = ref.status == got.status;
      const bool value_ok = ref.status == IntervalStatus::contradiction ||
                            (std::abs(ref.lower - got.lower) <= kCompareTol &&
                             std::abs(ref.upper - got.upper) <= kCompareTol);
      if (!status_ok || !value_ok) {
        std::fprintf(stderr,
                     "deep-check: engine and flat reference disagree on '%s': "
                     "engine [%.9f, %.9f] %s vs flat [%.9f, %.9f] %s\n",
                     target_raw[i].c_str(), got.lower, got.upper,
                     status_name(got.status).c_str(), ref.lower, ref.upper,
                     status_name(ref.status).c_str());
        return kExitInvalidModel;
      }
    }
  }

  if (model.status() == ModelStatus::contradiction) {
    std::fprintf(stderr,
                 "contradiction: the entered evidence has upper probability 0 "
                 "under the prior\n");
    return kExitContradiction;
  }
  return kExitOk;
}

int run_oracle(const std::string& file, const std::string& evidence_raw,
               const std::string& target_raw) {
  const std::uint64_t guard = guard_from_env();
  Model model = parse_model(read_file(file), guard);
  const Space& space = model.space();
  const FlatJoint flat = assemble_joint(model, guard);
  const Scope full = joint_scope(space);
  const Event evidence = extend(space, parse_event(space, evidence_raw), full);
  const Event target = extend(space, parse_event(space, target_raw), full);
  const Interval iv = flat_posterior(space, flat, target, evidence);
  print_interval_line(target_raw, iv);
  if (iv.status == IntervalStatus::contradiction) {
    std::fprintf(stderr,
                 "contradiction: the evidence has upper probability 0 under the "
                 "prior\n");
    return kExitContradiction;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"query tool for junction-tree models of lower/upper probabilities"};
  app.require_subcommand(1);

  std::string v_file;
  bool v_deep = false;
  CLI::App* validate = app.add_subcommand("validate", "check a model document");
  validate->add_option("file", v_file, "model JSON file")->required();
  validate->add_flag("--deep", v_deep,
                     "flatten the joint and verify duality and Markov structure");

  std::string q_file;
  std::vector<std::string> q_evidence;
  std::vector<std::string> q_targets;
  bool q_deep_check = false;
  CLI::App* query = app.add_subcommand("query", "posterior bounds for target events");
  query->add_option("file", q_file, "model JSON file")->required();
  query->add_option("--evidence", q_evidence, "finding as an expression (repeatable)");
  query->add_option("--target", q_targets, "target event expression (repeatable)");
  query->add_flag("--deep-check", q_deep_check,
                  "cross-check every answer against the flat reference path");

  std::string o_file;
  std::string o_evidence;
  std::string o_target;
  CLI::App* oracle = app.add_subcommand("oracle", "flat reference path, no trees");
  oracle->add_option("file", o_file, "model JSON file")->required();
  oracle->add_option("--evidence", o_evidence, "finding as an expression")->required();
  oracle->add_option("--target", o_target, "target event expression")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (validate->parsed()) return run_validate(v_file, v_deep);
    if (query->parsed()) return run_query(q_file, q_evidence, q_targets, q_deep_check);
    return run_oracle(o_file, o_evidence, o_target);
  } catch (const ExpressionError& e) {
    std::fprintf(stderr, "error: %s (at position %zu)\n", e.what(), e.position());
    return kExitUsage;
  } catch (const EvidenceError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvalidModel;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kExitInvalidModel;
  }
}
