"""
Excepciones base del banco de trabajo
"""


class WorkbenchError(Exception):
    """Error base de todas las apps del proyecto"""


class ConfigurationError(WorkbenchError):
    """Configuración de ejecución inválida"""
