#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "genusforge/shape.hpp"
#include "json.hpp"

namespace gf::cli {

using nlohmann::json;

inline constexpr const char* kReportSchema = "genusforge-report/1";

struct RunReport {
    std::string command;
    json parameters = json::object();
    json results = json::object();
    std::map<std::string, bool> checks;
    double wall_seconds = 0.0;

    bool all_pass() const;
    json to_json() const;
    static RunReport from_json(const json& j);
    std::string to_text() const;
    bool operator==(const RunReport& o) const;
};

// Exit status: 0 all checks pass, 1 a check failed.
int exit_code(const RunReport& r);

RunReport cmd_dims(std::optional<int> n, std::optional<Shape> shape, std::optional<int> i);
RunReport cmd_universal(std::optional<int> n, std::optional<Shape> shape, bool enumerate);

struct VerifyOptions {
    int max_n = 5;
    int n = 3;
    bool smoke = false;
    std::uint64_t seed = 1;
    int samples = 2000;
};
// suite: tensors, groups, lie, expmaps or all.
RunReport cmd_verify(const std::string& suite, const VerifyOptions& opt);

RunReport cmd_reconstruct(const Shape& shape, int j);

struct ArithArgs {
    std::vector<std::string> values;  // decimal entries
    std::optional<int> n, omega;
    std::vector<int> k;
    std::uint64_t budget = 10000;
};
// sub: validate, consistent, maximal, bound or search.
RunReport cmd_arith(const std::string& sub, const ArithArgs& args);

// Governing tensor of support A and pointer x on [n], in the text form.
RunReport cmd_tensors(int n, Subset A, int x);

// "1,3" -> {0,2}
Subset parse_block_list(const std::string& s);

}  // namespace gf::cli
