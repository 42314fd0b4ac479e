#include "app.hpp"

int main(int argc, char** argv)
{
    return subrig::app::run(argc, argv);
}
