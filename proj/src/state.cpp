#include "pas/state.hpp"

#include <sstream>

namespace pas {

std::string to_string(const State& s) {
    std::ostringstream os;
    os << "n=[";
    for (int k = 0; k < s.occupancy.rows(); ++k) {
        if (k) os << ";";
        for (int i = 0; i < s.occupancy.cols(); ++i) {
            if (i) os << ",";
            os << s.occupancy(k, i);
        }
    }
    os << "] q=[";
    for (size_t i = 0; i < s.queue.size(); ++i) {
        if (i) os << ",";
        os << s.queue[i];
    }
    os << "]";
    return os.str();
}

std::string to_string(const Action& a) {
    std::ostringstream os;
    bool any = false;
    for (int k = 0; k < a.assign.rows(); ++k)
        for (int i = 0; i < a.assign.cols(); ++i)
            if (a.assign(k, i) != 0) {
                os << (any ? " " : "") << "x[" << k << "][" << i << "]=" << a.assign(k, i);
                any = true;
            }
    for (int k = 0; k < a.transfer.wards(); ++k)
        for (int l = 0; l < a.transfer.wards(); ++l)
            for (int i = 0; i < a.transfer.types(); ++i)
                if (a.transfer(k, l, i) != 0) {
                    os << (any ? " " : "") << "y[" << k << "->" << l << "][" << i
                       << "]=" << a.transfer(k, l, i);
                    any = true;
                }
    if (!any) os << "(empty)";
    return os.str();
}

} // namespace pas
