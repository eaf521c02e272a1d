#ifndef GNSLAB_IO_HPP
#define GNSLAB_IO_HPP

#include <string>
#include <vector>

#include "json.hpp"

#include "gnslab/extension.hpp"
#include "gnslab/functional.hpp"
#include "gnslab/gns.hpp"
#include "gnslab/models.hpp"

namespace gnslab {

using Json = nlohmann::json;

// Model files carry explicit tensors; complex numbers are always [re, im]
// pairs, dense matrices are flat row-major lists, sparse tensors are entry
// lists ([i,j,l,re,im] for the core product, [i,p,q,re,im] for actions).
Json model_to_json(const QuasiAlgebraSpec& spec);
QuasiAlgebraSpec model_from_json(const Json& j);
QuasiAlgebraSpec load_model(const std::string& path);
void save_model(const std::string& path, const QuasiAlgebraSpec& spec);

Json functional_to_json(const Functional& omega);
Functional functional_from_json(const Json& j);
Functional load_functional(const std::string& path);
void save_functional(const std::string& path, const Functional& omega);

// Report serializers.  All numeric output flows through nlohmann's dump,
// which is deterministic for identical inputs.
Json validation_to_json(const ValidationReport& report);
Json boundedness_to_json(const BoundednessResult& result);
Json condition_report_to_json(const ConditionReport& report);
Json gns_report_to_json(const GNSRep& rep, const GnsVerification& v);
Json extension_report_to_json(const ExtensionSpec& ext,
                              const ConditionEntry& positivity,
                              const ConditionReport& representable);
Json domain_report_to_json(const DomainDe& dom);
Json chain_report_to_json(const ChainReport& rep);
Json sweep_to_json(const std::vector<SweepRow>& rows);

// CSV with the fixed column set
// family,size,hilbert_bound,ehb_status,ehb_zeta_sq,canonical_ratio,gamma_min;
// floats in %.12g, NaN cells empty.
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

std::string format_double(double v);

// path "-" means stdout.
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace gnslab

#endif
