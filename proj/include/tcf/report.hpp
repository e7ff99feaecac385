#pragma once

#include <string>
#include <vector>

namespace tcf {

struct Check {
    std::string name;
    std::string anchor;
    bool passed = false;
    std::string detail;
};

// Ordered list of named checks; a report passes iff every check passes.
class Report {
public:
    void add(std::string name, std::string anchor, bool passed, std::string detail = {});
    void append(const Report &o, const std::string &prefix = {});
    bool passed() const;
    size_t failures() const;
    const std::vector<Check> &checks() const { return checks_; }

private:
    std::vector<Check> checks_;
};

}
