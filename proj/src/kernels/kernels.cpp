#include "spin2/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace spin2::kernels {

const Ops& active_ops() {
    static const Ops& ops = []() -> const Ops& {
        const char* sel = std::getenv("SPIN2_KERNELS");
        if (sel && std::strcmp(sel, "scalar") == 0) return scalar_ops();
        if (sel && std::strcmp(sel, "avx2") == 0) {
            if (const Ops* v = avx2_ops()) return *v;
            return scalar_ops();
        }
        if (const Ops* v = avx2_ops()) return *v;
        return scalar_ops();
    }();
    return ops;
}

} // namespace spin2::kernels
