#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "iadrc/adrc.hpp"
#include "iadrc/simulation.hpp"

namespace iadrc {

/// Where a resolved parameter value came from.
enum class Provenance {
    published,    // published value of the reference experiment
    derived,      // computed from other parameters (b_hat)
    unpublished,  // not published; implementation default or calibration
    user,         // set in the config file to a non-default value
};

std::string to_string(Provenance p);

/// Which controller variant reads a key.
enum class KeyScope { shared, classical, improved };

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string section, std::string key, const std::string& message);
    const std::string& section() const noexcept { return section_; }
    const std::string& key() const noexcept { return key_; }

private:
    std::string section_;
    std::string key_;
};

struct ResolvedEntry {
    std::string section;
    std::string key;
    std::string value;
    std::string unit;
    Provenance provenance;
    KeyScope scope;
};

/// Parsed run configuration: one scenario plus the parameter sets of both
/// controller variants.
///
/// File format: `[section]` headers and `key = value` lines; `#` or `;` start
/// a comment. Keys are case-insensitive. Unknown sections or keys, duplicate
/// keys and values violating a parameter invariant are rejected.
struct RunConfig {
    Scenario scenario;
    HanTdParams han_td;
    IntdParams intd;
    FalNlsefParams fal_nlsef;
    InlsefParams inlsef;
    LesoParams leso;
    SmesoParams smeso;
    std::optional<double> b_hat_override;

    /// section.key of every entry set to a non-default value
    std::set<std::string> overridden;

    RunConfig();

    /// Input gain of the canonical form: the override if given, else from the
    /// motor parameters via the matched transform.
    double b_hat() const;

    /// Controller for `variant`. Throws ConfigError when a key read only by
    /// the other variant was overridden.
    ControllerConfig controller(ControllerVariant variant) const;

    /// Every schema entry with its resolved value and provenance.
    std::vector<ResolvedEntry> resolved() const;

    /// Checks all parameter invariants; throws ConfigError naming the section.
    void validate() const;
};

RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::string& path);

/// The default configuration written out as a config file.
std::string default_config_text();

}  // namespace iadrc
