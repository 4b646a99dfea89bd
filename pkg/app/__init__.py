# Empty init file for app package

