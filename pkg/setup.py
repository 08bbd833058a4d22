"""Setup file for the optuple package."""

from setuptools import setup, find_packages

setup(
    name="optuple",
    version="0.1.0",
    description="Unitary-equivalence classes of operator tuples",
    author="optuple developers",
    packages=find_packages(where=".", include=["src*"]),
    python_requires=">=3.10",
    install_requires=[
        "pydantic>=2.0",
        "typer>=0.9.0",
        "tenacity>=8.2.0",
        "rich>=13.0.0",
        "python-dotenv>=1.0.0",
        "numpy>=1.24.0",
        "scipy>=1.7.0",
        "immutabledict>=2.2.0",
        "jaxtyping>=0.2.20",
    ],
    extras_require={
        "dev": [
            "pytest>=7.0",
            "pytest-cov",
            "black",
            "ruff",
        ]
    },
    entry_points={
        "console_scripts": [
            "optuple=src.cli.main:app",
        ],
    },
)
