#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fermi/state.hpp"

namespace fermi {

/// One reproducible test state. `support` is the resolved key count
/// (already clamped to C(M,N)); seed is ignored for non-random families.
struct CorpusEntry {
  std::string name;
  std::string family;  // "slater", "yang" or "random"
  int n = 0;
  int m = 0;
  std::size_t support = 0;
  std::uint64_t seed = 0;
};

/// The fixed verification corpus: twenty seeded random states cycling
/// through N in 3..6, M in N+1..10 and support in {3, 8, full}, plus the
/// single-determinant states for N = 3..6 and two pairing states.
std::vector<CorpusEntry> default_corpus();

SlaterExpansion build_state(const CorpusEntry& entry);

void save_manifest(const std::vector<CorpusEntry>& entries,
                   const std::filesystem::path& path);
std::vector<CorpusEntry> load_manifest(const std::filesystem::path& path);

struct CheckResult {
  int id = 0;
  std::string label;
  bool pass = false;
  std::string detail;
};

/// Runs the full property battery over the given corpus and returns one
/// result per check, in a fixed order. All tolerances are pinned inside.
std::vector<CheckResult> run_acceptance_suite(
    const std::vector<CorpusEntry>& entries);

}  // namespace fermi
