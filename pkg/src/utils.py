"""
Various utility functions
that were not relevant to any specific module.
"""
import os
import sys
from inspect import signature

# environment variable with the default folder for output files
OUTPUT_DIR_ENV = "BYM_OUT_DIR"


def trim_docstring(docstring):
    """
    Remove leading and trailing lines and the common indentation.
    See PEP 257: https://peps.python.org/pep-0257/
    """
    if not docstring:
        return ""
    lines = docstring.expandtabs().splitlines()
    indent = sys.maxsize
    for line in lines[1:]:
        stripped = line.lstrip()
        if stripped:
            indent = min(indent, len(line) - len(stripped))
    trimmed = [lines[0].strip()]
    if indent < sys.maxsize:
        trimmed += [line[indent:].rstrip() for line in lines[1:]]
    while trimmed and not trimmed[-1]:
        trimmed.pop()
    while trimmed and not trimmed[0]:
        trimmed.pop(0)
    return "\n".join(trimmed)


def short_docstring(docstring):
    """
    Get the first line of an already trimmed docstring.
    """
    if not docstring:
        return ""

    return docstring.splitlines()[0]


def print_functions(obj):
    """
    Print the public methods of an object (or class)
    along with their signatures. Skips help().
    """
    func_list = []
    for name in dir(obj):
        if name.startswith("_") or name == "help":
            continue
        func = getattr(obj, name)
        if callable(func):
            func_list.append(func)

    if len(func_list) > 0:
        print("Methods:")
        for func in func_list:
            try:
                sig = signature(func)
            except (TypeError, ValueError):
                sig = "(...)"
            print(f"  {func.__name__}{sig}")
        print()


def help_with_class(cls, pars_cls=None):
    """
    Print the help for a class: the first line of its
    docstring, its methods and (optionally) the list of
    parameters with their defaults and descriptions.

    Parameters
    ----------
    cls : class
        The class to print help for.
    pars_cls : class, optional
        The Parameters subclass used by this class.
        It is instantiated without reading any config file.
    """
    description = short_docstring(trim_docstring(cls.__doc__))

    print(f"{cls.__name__}\n--------\n{description}")

    print_functions(cls)

    if pars_cls is not None:
        print("Parameters:")
        pars = pars_cls(cfg_file=False)
        pars.print()
        print()


def help_with_object(obj, owner_pars=None):
    """
    Print the help for an object, including the
    current values of its parameters (if it has a "pars").
    """
    description = short_docstring(trim_docstring(obj.__class__.__doc__))
    print(f"{obj.__class__.__name__}*\n--------\n{description}")

    print_functions(obj)

    if hasattr(obj, "pars"):
        print("Parameters:")
        obj.pars.print(owner_pars)
        print()


def progress(message, verbose, level=1):
    """
    Print a progress message to standard error
    if the verbosity is at least the given level.
    Standard output is kept for machine-readable results.
    """
    if verbose >= level:
        print(message, file=sys.stderr, flush=True)


def resolve_output_path(path):
    """
    Resolve an output filename.
    Absolute paths are returned as is.
    Relative paths are placed inside the folder
    given by the BYM_OUT_DIR environment variable,
    if it is defined, or the current directory otherwise.
    """
    if path is None or os.path.isabs(path):
        return path

    folder = os.environ.get(OUTPUT_DIR_ENV)
    if folder:
        os.makedirs(folder, exist_ok=True)
        return os.path.join(folder, path)

    return path
