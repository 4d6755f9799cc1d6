// Hecke spectra of spans split by S3 character, and the eigenvalue table entries checked against them.
#pragma once

#include "picard/catalog.hpp"
#include "picard/hecke.hpp"
#include "picard/structure.hpp"

#include <map>
#include <string>
#include <vector>

namespace picard {

struct SpanDef {
    std::string id;
    std::string title;       // e.g. "S_{1,10}"
    std::string generators;  // human description
};
const std::vector<SpanDef>& table_spans();
bool is_table_span(const std::string& id);
// the products that span the space; throws UnknownForm for an unknown id
std::vector<VectorFormFJ> build_span(Catalog& cat, const std::string& id);

// the three pieces on which T acts separately: R2 = R3 = 1, R2 = -1 with R3 = 1,
// and the R3 = r eigenspace (one dimension per copy of the standard character)
enum class S3Part { Trivial, Sign, Standard };
std::string part_name(S3Part p);

struct PartSpectrum {
    S3Part part;
    std::size_t dim = 0;
    int certified_to = 0;
    std::string refined_by;                         // operator used to split the part first, if any
    std::vector<std::pair<Cyc, std::size_t>> values;  // eigenvalue in Q(r), geometric multiplicity
    int unresolved_degree = 0;
    std::size_t unseparated = 0;  // dimensions T could not be certified on at this truncation
    std::size_t multiplicity(const Cyc& lambda) const;
};

struct SpanSpectrum {
    std::string span;
    std::string op;
    std::size_t rank = 0;
    S3Character character;
    std::vector<PartSpectrum> parts;
    // multiplicities of lambda in the three parts
    S3Character character_of(const Cyc& lambda) const;
    std::vector<Cyc> eigenvalues() const;
};

// When T cannot separate a part at its certified depth, the part is first split into eigenspaces
// of `refine` (an operator that certifies deeper, normally T(-2)) and T is applied on each of them.
SpanSpectrum span_spectrum(const std::vector<VectorFormFJ>& span, const std::string& span_id, const HeckeOperator& T,
                           OperatorTable& table, const HeckeOperator* refine = nullptr);

// one eigenvalue entry. `span` is a span id (then `irrep` names the S4 type) or a form name (then irrep is empty).
struct TableClaim {
    std::string id;
    std::string span;
    std::string irrep;
    std::string op;
    std::string expected;  // "a+b*r"
    std::string group;     // "table" or "lift"
};
const std::vector<TableClaim>& table_claims();

struct ClaimResult {
    TableClaim claim;
    bool pass = false;
    std::string found;   // eigenvalue(s) observed
    std::string detail;  // why it passed or failed
};

// checks claims, sharing spectra between claims on the same span and operator
class TableChecker {
public:
    explicit TableChecker(Catalog& cat) : cat_(&cat) {}
    ClaimResult check(const TableClaim& c);
    const SpanSpectrum& spectrum(const std::string& span_id, const std::string& op);

private:
    Catalog* cat_;
    std::map<std::string, std::vector<VectorFormFJ>> spans_;
    std::map<std::pair<std::string, std::string>, SpanSpectrum> spectra_;
};

}  // namespace picard
