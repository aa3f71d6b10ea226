#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <stdexcept>
#include <spdlog/spdlog.h>

int main(int argc, char** argv) {
    spdlog::set_level(spdlog::level::err);
    doctest::Context ctx(argc, argv);
    return ctx.run();
}
