#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fermi/corpus.hpp"
#include "fermi/decomposition.hpp"
#include "fermi/inequality.hpp"
#include "fermi/rdm.hpp"

namespace {

using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;

void write_json(const json& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw fermi::IoError("cannot open " + path + " for writing");
  out << doc.dump(2) << '\n';
}

json report_to_json(const fermi::InequalityReport& report) {
  return json{{"label", report.label}, {"t", report.t},
              {"r", report.r},         {"tau", report.tau},
              {"core", report.core},   {"lhs", report.lhs},
              {"rhs", report.rhs},     {"slack", report.slack},
              {"pass", report.pass}};
}

json ledger_to_json(const fermi::ConstantLedger& ledger) {
  json table = json::array();
  for (const auto& [key, value] : ledger.table) {
    table.push_back({{"s", std::get<0>(key)},
                     {"t", std::get<1>(key)},
                     {"r", std::get<2>(key)},
                     {"value", value}});
  }
  return json{{"t", ledger.t},
              {"n", ledger.n},
              {"cap_check", ledger.cap_check},
              {"table", table}};
}

struct SweepRow {
  int n, m, k;
  double hs_norm, op_norm, trace, s, s2, certified_bound, realized_ck;
};

void write_sweep_csv(const std::vector<SweepRow>& rows,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) throw fermi::IoError("cannot open " + path + " for writing");
  out << "n,m,k,hs_norm,op_norm,trace,S,S2,certified_bound,realized_Ck\n";
  for (const SweepRow& row : rows) {
    char buffer[512];
    std::snprintf(buffer, sizeof(buffer),
                  "%d,%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  row.n, row.m, row.k, row.hs_norm, row.op_norm, row.trace,
                  row.s, row.s2, row.certified_bound, row.realized_ck);
    out << buffer;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fermionic k-particle reduced-density-matrix verification lab"};
  app.require_subcommand(1);
  app.set_config("--config", "", "JSON/ini configuration file");

  int threads = 0;  // accepted for interface stability; evaluation is
                    // single-threaded to keep every artifact deterministic
  app.add_option("--threads", threads, "worker-pool cap")
      ->envname("FERMI_RDM_THREADS");

  // gen
  auto* gen = app.add_subcommand("gen", "generate a test state");
  std::string family = "random";
  int n = 0, m = 0;
  std::size_t support = 0;
  std::uint64_t seed = 1;
  std::string out_path = "state.json";
  gen->add_option("--family", family, "slater, yang or random")->required();
  gen->add_option("--n", n, "particle count")->required();
  gen->add_option("--m", m, "orbital count")->required();
  gen->add_option("--support", support, "key count for random states");
  gen->add_option("--seed", seed, "random seed");
  gen->add_option("--out", out_path, "output state file");

  // rdm
  auto* rdm_cmd = app.add_subcommand("rdm", "spectrum and entropies");
  std::string state_path;
  int k = 1;
  bool normalized = false;
  std::string rdm_out = "report.json";
  rdm_cmd->add_option("--state", state_path, "state file")->required();
  rdm_cmd->add_option("--k", k, "reduction order")->required();
  rdm_cmd->add_flag("--normalized", normalized, "divide by C(N,k) first");
  rdm_cmd->add_option("--out", rdm_out, "output report");

  // verify-identity
  auto* identity = app.add_subcommand(
      "verify-identity", "check the hs-norm cell decomposition");
  std::string id_state, id_out = "decomp.json";
  int id_k = 1;
  identity->add_option("--state", id_state, "state file")->required();
  identity->add_option("--k", id_k, "reduction order")->required();
  identity->add_option("--out", id_out, "output report");

  // verify-inequalities
  auto* verify = app.add_subcommand("verify-inequalities",
                                    "run one of the estimate suites");
  std::string v_state, v_out = "report.json", lemma = "odd";
  int v_t = 1, v_k = 0;
  double tau = 0.0;
  verify->add_option("--state", v_state, "state file")->required();
  verify->add_option("--t", v_t, "block size")->required();
  verify->add_option("--tau", tau, "balance parameter for the even suite");
  verify->add_option("--k", v_k, "order for the full certificate chain");
  verify->add_option("--lemma", lemma, "odd, even, prop or theorem");
  verify->add_option("--out", v_out, "output report");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "scaling table across N");
  std::string sweep_family = "random", sweep_out = "sweep.csv",
              n_range = "3:6";
  int sweep_k = 2, m_offset = 3;
  std::size_t sweep_support = 0;  // 0 = full
  std::uint64_t sweep_seed = 1;
  sweep->add_option("--family", sweep_family, "state family");
  sweep->add_option("--k", sweep_k, "reduction order")->required();
  sweep->add_option("--n-range", n_range, "inclusive range lo:hi");
  sweep->add_option("--m-offset", m_offset, "orbitals beyond N");
  sweep->add_option("--support", sweep_support, "key count (0 = full)");
  sweep->add_option("--seed", sweep_seed, "random seed");
  sweep->add_option("--out", sweep_out, "output csv");

  // corpus
  auto* corpus_cmd =
      app.add_subcommand("corpus", "run the full acceptance battery");
  std::string manifest_path;
  corpus_cmd->add_option("--manifest", manifest_path,
                         "corpus manifest (defaults to the built-in one)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen) {
      fermi::SlaterExpansion psi = [&]() {
        if (family == "slater") {
          std::vector<int> orbitals(static_cast<std::size_t>(n));
          for (int i = 0; i < n; ++i) orbitals[static_cast<std::size_t>(i)] = i + 1;
          return fermi::slater_state(fermi::MultiIndex::from_orbitals(orbitals),
                                     m);
        }
        if (family == "yang") return fermi::yang_pairing_state(n, m);
        if (family == "random") {
          const auto space =
              static_cast<std::size_t>(fermi::binomial(m, n));
          return fermi::random_state(n, m, support ? support : space, seed);
        }
        throw fermi::ValidationError("unknown family: " + family);
      }();
      fermi::save_state(psi, out_path);
      return kExitPass;
    }

    if (*rdm_cmd) {
      const fermi::SlaterExpansion psi = fermi::load_state(state_path);
      const fermi::SpectrumReport report =
          fermi::spectrum(fermi::rdm_slater(psi, k), normalized);
      write_json(json{{"n", psi.particle_count()},
                      {"m", psi.orbital_count()},
                      {"k", k},
                      {"method", "sign-calculus"},
                      {"normalized", normalized},
                      {"eigenvalues", report.eigenvalues},
                      {"trace", report.trace},
                      {"op_norm", report.op_norm},
                      {"hs_norm", report.hs_norm},
                      {"von_neumann", report.von_neumann},
                      {"renyi2", report.renyi2}},
                 rdm_out);
      return kExitPass;
    }

    if (*identity) {
      const fermi::SlaterExpansion psi = fermi::load_state(id_state);
      const fermi::DecompositionReport report =
          fermi::hs_decomposition(psi, id_k);
      json cells = json::array();
      for (const fermi::DecompositionCell& cell : report.cells) {
        cells.push_back({{"s", cell.s},
                         {"r", cell.r},
                         {"weight", cell.weight},
                         {"inner_sum", cell.inner_sum},
                         {"contribution", cell.contribution}});
      }
      const bool pass = std::abs(report.residual) <=
                        1e-10 * std::max(1.0, report.direct_hs_sq);
      write_json(json{{"k", report.k},
                      {"cells", cells},
                      {"total", report.total},
                      {"direct_hs_sq", report.direct_hs_sq},
                      {"residual", report.residual},
                      {"pass", pass}},
                 id_out);
      return pass ? kExitPass : kExitCheckFailure;
    }

    if (*verify) {
      const fermi::SlaterExpansion psi = fermi::load_state(v_state);
      const fermi::GroupSums sums(psi);
      const int nn = psi.particle_count();
      json doc;
      bool all_pass = true;
      if (lemma == "odd" || lemma == "even") {
        json cells = json::array();
        for (int r = v_t; r <= nn; ++r) {
          for (fermi::MultiIndex d : sums.cores(r)) {
            const fermi::InequalityReport report =
                lemma == "odd"
                    ? fermi::odd_lemma_check(sums, v_t, r, d)
                    : fermi::even_lemma_check(
                          sums, v_t, r, d, tau > 0.0 ? tau : nn);
            all_pass = all_pass && report.pass;
            cells.push_back(report_to_json(report));
          }
        }
        doc = json{{"lemma", lemma}, {"t", v_t}, {"cells", cells}};
      } else if (lemma == "prop") {
        const auto [report, ledger] = fermi::proposition_check(sums, v_t);
        all_pass = report.pass;
        doc = json{{"lemma", lemma},
                   {"report", report_to_json(report)},
                   {"ledger", ledger_to_json(ledger)}};
      } else if (lemma == "theorem") {
        const fermi::TheoremTrace trace =
            fermi::theorem_trace(psi, v_k > 0 ? v_k : v_t);
        all_pass = trace.sound;
        doc = json{{"lemma", lemma},
                   {"bound", trace.bound},
                   {"direct_hs_sq", trace.direct_hs_sq},
                   {"realized_ck", trace.realized_ck},
                   {"sound", trace.sound},
                   {"ledger", ledger_to_json(trace.ledger)}};
      } else {
        throw fermi::ValidationError("unknown suite: " + lemma);
      }
      doc["pass"] = all_pass;
      write_json(doc, v_out);
      return all_pass ? kExitPass : kExitCheckFailure;
    }

    if (*sweep) {
      const auto colon = n_range.find(':');
      if (colon == std::string::npos) {
        throw fermi::ValidationError("n-range must look like 3:6");
      }
      const int lo = std::stoi(n_range.substr(0, colon));
      const int hi = std::stoi(n_range.substr(colon + 1));
      std::vector<SweepRow> rows;
      for (int nn = lo; nn <= hi; ++nn) {
        const int mm = nn + m_offset;
        fermi::SlaterExpansion psi = [&]() {
          if (sweep_family == "slater") {
            std::vector<int> orbitals(static_cast<std::size_t>(nn));
            for (int i = 0; i < nn; ++i) {
              orbitals[static_cast<std::size_t>(i)] = i + 1;
            }
            return fermi::slater_state(
                fermi::MultiIndex::from_orbitals(orbitals), mm);
          }
          const auto space =
              static_cast<std::size_t>(fermi::binomial(mm, nn));
          return fermi::random_state(
              nn, mm, sweep_support ? std::min(sweep_support, space) : space,
              sweep_seed);
        }();
        const fermi::SpectrumReport spec =
            fermi::spectrum(fermi::rdm_slater(psi, sweep_k), false);
        const fermi::SpectrumReport norm_spec =
            fermi::spectrum(fermi::rdm_slater(psi, sweep_k), true);
        const fermi::TheoremTrace trace = fermi::theorem_trace(psi, sweep_k);
        rows.push_back({nn, mm, sweep_k, spec.hs_norm, spec.op_norm,
                        spec.trace, norm_spec.von_neumann, norm_spec.renyi2,
                        trace.bound, trace.realized_ck});
      }
      write_sweep_csv(rows, sweep_out);
      return kExitPass;
    }

    if (*corpus_cmd) {
      const std::vector<fermi::CorpusEntry> entries =
          manifest_path.empty() ? fermi::default_corpus()
                                : fermi::load_manifest(manifest_path);
      bool all_pass = true;
      for (const fermi::CheckResult& result :
           fermi::run_acceptance_suite(entries)) {
        std::printf("[%2d] %s %s (%s)\n", result.id,
                    result.pass ? "PASS" : "FAIL", result.label.c_str(),
                    result.detail.c_str());
        all_pass = all_pass && result.pass;
      }
      return all_pass ? kExitPass : kExitCheckFailure;
    }
  } catch (const fermi::OverlapError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const fermi::NumericalError& e) {
    std::cerr << "check failure: " << e.what() << '\n';
    return kExitCheckFailure;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
