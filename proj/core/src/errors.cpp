#include "wmlab/errors.hpp"
