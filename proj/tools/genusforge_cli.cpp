#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "genusforge/arith.hpp"
#include "genusforge/errors.hpp"
#include "genusforge/parallel.hpp"
#include "report.hpp"

using namespace gf;
using namespace gf::cli;

namespace {

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(static_cast<int>(parse_decimal(item)));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Expansion groups, governing tensors and their maps over F2"};
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "print the report as JSON");

    std::optional<int> n, i;
    std::string shape_str;
    bool enumerate = false;

    auto* dims = app.add_subcommand("dims", "Cons and Gov dimensions per arity");
    dims->add_option("--n", n, "all-ones shape on [n]");
    dims->add_option("--shape", shape_str, "block shape, e.g. 2,1");
    dims->add_option("--i", i, "single arity");

    auto* uni = app.add_subcommand("universal", "size of the universal group");
    uni->add_option("--n", n);
    uni->add_option("--shape", shape_str);
    uni->add_flag("--enumerate", enumerate, "build the group and check the axioms");

    VerifyOptions vo;
    std::string suite;
    auto* ver = app.add_subcommand("verify", "run a property suite");
    ver->add_option("suite", suite, "tensors, groups, lie, expmaps or all")->required();
    ver->add_option("--max-n", vo.max_n);
    ver->add_option("--n", vo.n);
    ver->add_flag("--smoke", vo.smoke, "small caps");
    ver->add_option("--seed", vo.seed);
    ver->add_option("--samples", vo.samples, "random tuples per support and pointer");

    int j = 2;
    auto* rec = app.add_subcommand("reconstruct", "rebuild a layer of the Phi filtration from its corners");
    rec->add_option("--shape", shape_str)->required();
    rec->add_option("--j", j)->required();

    ArithArgs aa;
    std::string arith_sub, k_str;
    auto* ar = app.add_subcommand("arith", "acceptable vectors, bounds and consistency");
    ar->add_option("sub", arith_sub, "validate, consistent, maximal, bound or search")->required();
    ar->add_option("values", aa.values, "decimal entries");
    ar->add_option("--n", aa.n);
    ar->add_option("--omega", aa.omega);
    ar->add_option("--k", k_str, "omega profile, e.g. 2,1");
    ar->add_option("--budget", aa.budget, "largest prime tried by search");

    int tn = 3, tx = 1;
    std::string tA;
    auto* ten = app.add_subcommand("tensors", "print a governing tensor");
    ten->add_option("--n", tn)->required();
    ten->add_option("--A", tA, "support, e.g. 1,2,3")->required();
    ten->add_option("--x", tx, "pointer in A")->required();

    CLI11_PARSE(app, argc, argv);
    configured_threads();

    try {
        std::optional<Shape> shape;
        if (!shape_str.empty()) shape = Shape::parse(shape_str);
        RunReport r;
        if (*dims) r = cmd_dims(n, shape, i);
        else if (*uni) r = cmd_universal(n, shape, enumerate);
        else if (*ver) r = cmd_verify(suite, vo);
        else if (*rec) r = cmd_reconstruct(*shape, j);
        else if (*ar) {
            if (!k_str.empty()) aa.k = parse_int_list(k_str);
            r = cmd_arith(arith_sub, aa);
        } else if (*ten) {
            r = cmd_tensors(tn, parse_block_list(tA), tx - 1);
        }
        if (as_json)
            std::cout << r.to_json().dump(2) << "\n";
        else
            std::cout << r.to_text();
        return exit_code(r);
    } catch (const ValidationError& e) {
        std::cerr << "invalid input (" << e.rule() << ", entry " << e.entry() + 1 << "): " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ResourceError& e) {
        std::cerr << "resource limit: " << e.what();
        if (e.predicted_log2() >= 0) std::cerr << " (predicted log2 size " << e.predicted_log2() << ")";
        std::cerr << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 4;
    }
}
