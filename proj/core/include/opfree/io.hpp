#pragma once

// JSON and CSV serialization for the public types. Matrices serialize as
// row-major arrays of [re, im] pairs with a "dim" field; partitions as lists
// of 1-based index lists; distributions as {dim, order, bound, tensors}.

#include <string>

#include "json.hpp"
#include "opfree/dist.hpp"
#include "opfree/hinchin.hpp"
#include "opfree/nc.hpp"
#include "opfree/steinitz.hpp"

namespace opfree {

using Json = nlohmann::json;

Json matrix_to_json(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd matrix_from_json(const Json& j);

Json multilinear_to_json(const MultilinearMap& m);
MultilinearMap multilinear_from_json(const Json& j);

Json moments_to_json(const TruncatedMoments& mu);
TruncatedMoments moments_from_json(const Json& j);

Json cumulants_to_json(const CumulantSequence& k);
CumulantSequence cumulants_from_json(const Json& j);

Json realized_to_json(const RealizedModel& m);
RealizedModel realized_from_json(const Json& j);

Json partition_to_json(const NCPartition& p);   // 1-based indices
NCPartition partition_from_json(const Json& j);

Json instance_to_json(const SteinitzInstance& inst);
SteinitzInstance instance_from_json(const Json& j);

Json selection_to_json(const SelectionResult& r);  // 1-based indices

Json row_report_to_json(const RowReport& r);
Json experiment_to_json(const ExperimentReport& r);

/// One vector per line, comma-separated components.
std::vector<Eigen::VectorXd> read_vectors_csv(const std::string& path);
void write_vectors_csv(const std::string& path, const std::vector<Eigen::VectorXd>& vectors);

std::string json_pretty(const Json& j);
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);
Json read_json_file(const std::string& path);

}  // namespace opfree
