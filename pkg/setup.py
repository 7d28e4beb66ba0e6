from setuptools import setup, find_packages

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    name="surjectivity-bound",
    version="0.1.0",
    author="Surjectivity Bound Team",
    description="Effective surjectivity bound C_K,S for mod p representations of elliptic curves over totally real Galois fields",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "tests.*"]),
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.9",
    install_requires=[
        "sympy",
        "requests",
    ],
    extras_require={
        "dev": ["pytest", "hypothesis", "black", "flake8"],
    },
    entry_points={
        "console_scripts": [
            "surjectivity-bound=surjectivity_bound.cli:main",
        ],
    },
)
