#ifndef MF_IO_HPP
#define MF_IO_HPP

#include <filesystem>
#include <string>

#include <json.hpp>

#include "mf/classifier.hpp"
#include "mf/grid.hpp"
#include "mf/oracle.hpp"
#include "mf/quantum.hpp"
#include "mf/reconstruct.hpp"

namespace mf {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// All readers throw ParseError on malformed input.

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

Json grid_to_json(const GridSpec& grid);
GridSpec grid_from_json(const Json& j);

Json chain_to_json(const Chain& chain);
Chain chain_from_json(const Json& j);

Json phase_to_json(const PhaseTensor& rho, const GridSpec& grid);
PhaseTensor phase_from_json(const Json& j, const GridSpec& expected);

Json wavefunction_to_json(const WaveFunction& psi);
WaveFunction wavefunction_from_json(const Json& j);
Json ensemble_to_json(const Ensemble& ens);
Ensemble ensemble_from_json(const Json& j);
bool is_ensemble_json(const Json& j);

Json classification_to_json(const ChainGraph& graph, const Classification& c);
Json compatibility_to_json(const CompatibilityReport& r, double tol);
Json feasibility_to_json(const FeasibilityResult& r);
Json lemma3_to_json(const Lemma3Certificate& c);
Json family_to_json(const SolutionFamily& s);

}  // namespace mf

#endif  // MF_IO_HPP
