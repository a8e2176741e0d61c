#pragma once

// Built-in roster of driven-force and nonlinearity systems, each carrying
// the gauge function that generates it, the declared closed-form result,
// default parameter values, and the gauge-family identification that
// reproduces the gauge. Entries can re-verify themselves.

#include <string>
#include <vector>

#include "gaugeforge/eval.hpp"
#include "gaugeforge/expr.hpp"
#include "gaugeforge/mechanics.hpp"

namespace gaugeforge {

enum class EntryKind { Force, Nonlinearity };

std::string_view entry_kind_name(EntryKind k);

struct CatalogEntry {
    std::string id;
    EntryKind kind;
    ExprList phi_parts;     // the published split (metadata; the sum is what matters)
    GaugeFunction phi;      // sum of phi_parts, canonical
    Expr declared;          // the published force F(t) or nonlinearity H(x)
    Binding defaults;       // default parameter values
    GaugeFamilySpec family; // identification that regenerates phi at the defaults
};

class CatalogError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

const std::vector<CatalogEntry>& list_entries();

// Entry by id; throws CatalogError listing the valid ids on a miss.
const CatalogEntry& lookup(const std::string& id);

struct VerificationReport {
    std::string id;
    Expr force;                  // symbolic force_from_gauge(phi, +1)
    bool force_matches = false;  // force vs declared, numerically
    bool family_matches = false; // family-built gauge vs phi, numerically
    bool null_ok = false;        // gauge yields a null Lagrangian
    std::string family_description;
    std::string diagnostic;      // non-empty on failure

    bool passed() const { return force_matches && family_matches && null_ok; }
};

// Checks the entry against its declared force under the default binding:
// 200 seeded samples with t in [0,10], x in [-2,2], parameters pinned at
// their defaults, relative tolerance 1e-10.
VerificationReport verify_entry(const CatalogEntry& e, std::uint64_t seed = default_seed());

std::string describe(const GaugeFamilySpec& spec);

// One tab-separated record per entry: id, kind, phi, declared, params.
std::string export_entries();

}  // namespace gaugeforge
