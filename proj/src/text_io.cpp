#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "genusforge/errors.hpp"
#include "genusforge/groups.hpp"

namespace gf {

namespace {

std::string hex_element(const GroupElement& g) {
    std::ostringstream os;
    os << std::hex;
    for (std::size_t c = 0; c < g.comps.size(); ++c) {
        if (c) os << ' ';
        os << g.comps[c].poly << ':' << g.comps[c].vec;
    }
    return os.str();
}

GroupElement parse_element(std::istringstream& is, int factors) {
    GroupElement g;
    for (int c = 0; c < factors; ++c) {
        std::string tok;
        if (!(is >> tok)) throw DomainError("element line has too few components");
        const auto colon = tok.find(':');
        if (colon == std::string::npos) throw DomainError("component must read poly:vec");
        try {
            SemidirectElement e;
            e.poly = std::stoull(tok.substr(0, colon), nullptr, 16);
            e.vec = static_cast<Subset>(std::stoul(tok.substr(colon + 1), nullptr, 16));
            g.comps.push_back(e);
        } catch (const std::exception&) {
            throw DomainError("bad hex component '" + tok + "'");
        }
    }
    return g;
}

}  // namespace

void dump_group(std::ostream& os, const ExpansionGroup& G) {
    const auto& m = G.model();
    os << "shape " << G.shape().to_string() << '\n';
    os << "n " << m.n() << '\n';
    os << "pointers";
    for (int p : m.pointers()) os << ' ' << p + 1;
    os << '\n';
    os << "order " << G.order() << '\n';
    for (int x = 0; x < G.num_generators(); ++x) os << "gen " << x + 1 << ' ' << hex_element(G.element(G.generator(x))) << '\n';
    for (std::uint32_t e = 0; e < G.order(); ++e) os << "elem " << hex_element(G.element(e)) << '\n';
}

GroupDump read_group_dump(std::istream& is) {
    GroupDump d;
    std::string line;
    std::size_t order = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "shape") {
            std::string s;
            ls >> s;
            if (s.size() < 2 || s.front() != '(' || s.back() != ')') throw DomainError("bad shape line");
            d.shape = Shape::parse(s.substr(1, s.size() - 2));
        } else if (tag == "n") {
            ls >> d.n;
        } else if (tag == "pointers") {
            int p;
            while (ls >> p) d.pointers.push_back(p - 1);
        } else if (tag == "order") {
            ls >> order;
        } else if (tag == "gen") {
            int x;
            ls >> x;
            d.gens.push_back(parse_element(ls, static_cast<int>(d.pointers.size())));
        } else if (tag == "elem") {
            d.elements.push_back(parse_element(ls, static_cast<int>(d.pointers.size())));
        } else {
            throw DomainError("unknown dump line: " + line);
        }
    }
    if (d.elements.size() != order) throw DomainError("dump declares a different order than it lists");
    return d;
}

}  // namespace gf
