#include "tcf/report.hpp"

#include <algorithm>

namespace tcf {

void Report::add(std::string name, std::string anchor, bool passed, std::string detail) {
    checks_.push_back(Check{std::move(name), std::move(anchor), passed, std::move(detail)});
}

void Report::append(const Report &o, const std::string &prefix) {
    for (const auto &c : o.checks_) {
        Check copy = c;
        if (!prefix.empty())
            copy.name = prefix + copy.name;
        checks_.push_back(std::move(copy));
    }
}

bool Report::passed() const { return failures() == 0; }

size_t Report::failures() const {
    return static_cast<size_t>(
        std::count_if(checks_.begin(), checks_.end(), [](const Check &c) { return !c.passed; }));
}

}
