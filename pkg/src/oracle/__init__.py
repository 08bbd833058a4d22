"""Reference checks: trace-word equivalence, planted instances and the law suite."""
