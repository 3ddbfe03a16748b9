"""codequiz: retrieval-grounded MCQ generation with tool-checked validation.

The pipeline ingests instructor materials into kind-labeled chunks, retrieves
the closest chunks for a topic, asks a Generator agent to produce a
four-option code-comprehension question, asks a Validator agent to classify
it on seven pedagogical dimensions (with deterministic arithmetic and
code-execution tools at its disposal), stores the pair for human review, and
aggregates reviewer agree/disagree verdicts into quality rates.
"""

__version__ = "0.1.0"
