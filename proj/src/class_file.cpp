#include "bml/class_file.hpp"

#include <fstream>
#include <sstream>

#include "bml/classes/decision_list.hpp"
#include "bml/classes/equal_piece.hpp"
#include "bml/classes/threshold.hpp"

namespace bml {

namespace {
std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}
} // namespace

ClassFile ClassFile::parse_text(const std::string& text) {
    ClassFile cf;
    std::istringstream in(text);
    std::string line;
    bool saw_kind = false, saw_n = false;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw input_error("class file line without '=': " + line);
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key == "kind") {
            cf.kind = value;
            saw_kind = true;
        } else if (key == "n") {
            cf.n = std::stoi(value);
            saw_n = true;
        } else if (key == "p") {
            cf.p = Rational::parse(value);
        } else if (key == "seed-class") {
            cf.seed_class = std::stoull(value);
        } else {
            throw input_error("unknown class file key: " + key);
        }
    }
    if (!saw_kind) throw input_error("class file missing 'kind'");
    if (!saw_n) throw input_error("class file missing 'n'");
    return cf;
}

ClassFile ClassFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open class file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str());
}

ClassPtr ClassFile::build() const {
    if (kind == "threshold") return std::make_shared<ThresholdClass>(n);
    if (kind == "equal-piece") {
        if (!p) throw input_error("equal-piece class file needs p");
        return std::make_shared<EqualPieceClass>(n, *p);
    }
    if (kind == "decision-list") return std::make_shared<DecisionListClass>(n);
    throw input_error("unknown class kind: " + kind);
}

} // namespace bml
