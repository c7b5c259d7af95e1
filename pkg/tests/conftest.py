from hypothesis import settings

# One fixed profile for the whole suite: no wall-clock deadline flakes, and
# derandomized example generation so CI runs are reproducible.
settings.register_profile("repro", deadline=None, max_examples=25, derandomize=True)
settings.load_profile("repro")
