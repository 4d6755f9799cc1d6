// Named forms built from theta series, and the identities they satisfy.
#pragma once

#include "picard/fj.hpp"
#include "picard/theta.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace picard {

using FormRecord = VectorFormFJ;

struct UnknownForm : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

class Catalog {
public:
    Catalog(OperatorTable& table, int truncation);

    int truncation() const { return w_; }
    OperatorTable& table() { return *table_; }

    // memoized; throws UnknownForm
    const FormRecord& get(const std::string& name);
    const FJSeries& last(const std::string& name) { return get(name).last; }

    static const std::vector<std::string>& names();
    static bool known(const std::string& name);

    // theta_nu = sum rho^(-nu Tr xi) m_xi(Y) w^N(xi)
    FJSeries theta(int nu);
    // (1/6) sum xi^5 m_xi(X) w^N(xi)
    FJSeries zeta_series();

private:
    FormRecord build(const std::string& name);

    OperatorTable* table_;
    int w_;
    std::map<std::string, FormRecord> forms_;
};

struct IdentityReport {
    std::string id;
    std::string anchor;
    int truncation = 0;
    bool pass = false;
    std::vector<std::string> details;
};

const std::vector<std::string>& identity_names();
// throws UnknownForm for an unknown id; failures are report content
IdentityReport verify_identity(Catalog& cat, const std::string& id);

// R2 / R3 images of a form's last component (R2 carries the sign (-1)^(k+j))
FJSeries act_r2(const FormRecord& f);
FJSeries act_r3(const FormRecord& f);

}  // namespace picard
