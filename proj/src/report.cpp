#include "stackel/forest.hpp"
