#pragma once

#include <string>

#include <json.hpp>

#include "phasestab/frames.hpp"
#include "phasestab/holder.hpp"
#include "phasestab/instability.hpp"
#include "phasestab/stability.hpp"

// JSON reports. Keys are emitted in a fixed order and numbers round-trip, so
// equal inputs give byte-identical documents.
namespace phasestab {

using Json = nlohmann::ordered_json;

/// Real-field entries as numbers, complex ones as [re, im].
Json vector_json(const HVector& v, ScalarField field);
Json scalar_json(Complex z, ScalarField field);

Json to_report(const CPReport& report, ScalarField field);
Json to_report(const PRVerdict& verdict, ScalarField field);
Json to_report(const LiftedGain& gain, ScalarField field);
Json to_report(const WitnessPair& pair, ScalarField field);
Json to_report(const PerturbationResult& result, double eps);
Json to_report(const HolderRun& run);

/// Two-space indentation plus a trailing newline.
std::string dump_report(const Json& doc);

}  // namespace phasestab
