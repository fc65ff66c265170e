#include "nrcav/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>

namespace nrcav {

int env_thread_count()
{
    const char* text = std::getenv("NRCAV_THREADS");
    if (text == nullptr) {
        return 0;
    }
    int value = 0;
    const char* end = text + std::strlen(text);
    auto [ptr, ec] = std::from_chars(text, end, value);
    if (ec != std::errc{} || ptr != end || value < 0) {
        return 0;
    }
    return value;
}

}  // namespace nrcav
