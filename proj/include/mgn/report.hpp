#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mgn/rational.hpp"

namespace mgn {

inline constexpr const char* kEngineVersion = "1.0.0";

/// One computed value in a report: exact decimal string for integers, "p/q"
/// otherwise; never floating point.
struct ReportCell {
  int g = 0;
  int n = 0;
  std::string kind;   // chi-open | chi-bar | e-open | e-bar
  std::string value;  // exact string
  std::string route;  // graphsum | wick | direct | genfun | formula | combined
  long ms = 0;        // wall time; 0 unless timings were requested
};

struct ReportDocument {
  std::string version = kEngineVersion;
  std::string config;  // window/bounds echo
  std::vector<ReportCell> cells;
};

std::string render_csv(const ReportDocument& doc);
std::string render_json(const ReportDocument& doc);
std::string render_markdown(const ReportDocument& doc);

/// 5-significant-digit scientific rendering, e.g. 1666295400720 -> "1.6663E+12".
std::string sci5(const Integer& v);

uint64_t fnv1a(const std::string& s);

/// An embedded table of expected values with an integrity checksum. A cell is
/// either an exact integer string or a printed scientific rendering (then the
/// check compares sci5 of the computed value).
struct TableFixture {
  std::string name;
  int g_lo, g_hi, n_lo, n_hi;
  std::vector<std::string> cells;  // row-major
  uint64_t checksum;               // pinned FNV-1a of the joined cells

  const std::string& at(int g, int n) const;
  void verify_checksum() const;  // throws consistency_error on tampering
};

const TableFixture& table1_fixture();
const TableFixture& table2_fixture();

/// Exact regression value for the Table 1 cell the paper prints only in
/// scientific notation.
const Integer& table1_g10_n8_exact();

/// Versioned on-disk result cache keyed by (kind, g, n, route); entries from
/// other engine versions are ignored. Directory resolution: explicit argument,
/// else MGN_EULER_CACHE, else disabled.
class ResultCache {
 public:
  explicit ResultCache(std::string dir);
  static std::string resolve_dir(const std::string& cli_dir);

  std::optional<std::string> get(const std::string& kind, int g, int n,
                                 const std::string& route) const;
  void put(const std::string& kind, int g, int n, const std::string& route,
           const std::string& value);
  void save() const;
  bool enabled() const { return !dir_.empty(); }

 private:
  std::string dir_;
  std::string file_;
  std::vector<std::pair<std::string, std::string>> entries_;
};

struct VerifyOptions {
  bool full = false;
  int jobs = 1;
  bool progress = false;
};

struct VerifyResult {
  bool ok = true;
  std::vector<std::string> passed;
  std::vector<std::string> failures;
};

/// The verification gate: property suites plus route equalities (quick), and
/// additionally both paper tables with all cross-checks (full).
VerifyResult run_verify(const VerifyOptions& opt);

}  // namespace mgn
