#ifndef IDEMX_CAMPAIGN_HPP
#define IDEMX_CAMPAIGN_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "idemx/instance_io.hpp"

namespace idemx {

inline constexpr std::string_view kToolkitVersion = "0.1.0";

enum class ReportFormat { json, csv };

struct CampaignConfig {
    std::uint64_t seed = 42;
    std::vector<std::string> suites;
    /// Keys "X", "Y" or "cases", optionally qualified as "<suite>.<key>".
    std::map<std::string, std::int64_t> size_caps;
    double tol = 1e-9;
    std::optional<std::filesystem::path> output;
    ReportFormat format = ReportFormat::json;
};

struct CaseWitness {
    std::string suite;
    std::size_t case_index = 0;
    std::uint64_t seed = 0;
    json instance;
    std::string detail;
};

struct SuiteReport {
    std::string name;
    std::size_t cases_run = 0;
    std::size_t passed = 0;
    std::size_t failed = 0;
    std::vector<CaseWitness> witnesses;
    double wall_time_s = 0.0;
};

struct CampaignReport {
    std::string version{kToolkitVersion};
    CampaignConfig config;
    std::vector<SuiteReport> suites;
    double wall_time_s = 0.0;

    std::size_t cases_run() const noexcept;
    std::size_t passed() const noexcept;
    std::size_t failed() const noexcept;
    const SuiteReport* find(std::string_view suite) const noexcept;
};

struct CaseVerdict {
    bool pass = true;
    std::string detail;
};

/// Catalogue order.
const std::vector<std::string>& suite_names();

/// Throws UnknownSuite, or InvariantViolation("cap.<key>") for caps outside
/// the hard limits.
void validate_config(const CampaignConfig& cfg);

/// Runs the requested suites in order. Case seeds are derived before any
/// work starts, so IDEMX_THREADS never changes the result. Writes the report
/// to cfg.output when set (IoError on failure).
CampaignReport run_campaign(const CampaignConfig& cfg);

/// Re-runs one case from its witness fields.
CaseVerdict replay_case(std::string_view suite, const json& instance, std::uint64_t seed,
                        double tol);

json to_json(const CampaignReport& report);
std::string to_csv(const CampaignReport& report);
/// One line per suite plus a totals line.
std::string summary(const CampaignReport& report);
/// Report JSON with every wall_time_s field removed.
json without_timing(json report);

void write_report(const CampaignReport& report, const std::filesystem::path& path,
                  ReportFormat format);

/// The embeddings used by the recovery suite; element 0 is the three-point
/// instance that admits no usc retraction.
std::vector<json> recovery_corpus(std::uint64_t seed, std::size_t count, std::size_t max_y);

} // namespace idemx

#endif // IDEMX_CAMPAIGN_HPP
