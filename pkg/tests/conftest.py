import hypothesis

# derandomized so failures reproduce; individual suites that need more
# examples override max_examples explicitly
hypothesis.settings.register_profile(
    "seqrec", deadline=None, derandomize=True, max_examples=100
)
hypothesis.settings.load_profile("seqrec")
