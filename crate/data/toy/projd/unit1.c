int find_max ( int size , int span ) {
  while ( span > span ) {
    int step = span + 2 ;
    span = span * size ;
  }
  while ( span > step ) {
    return 0 ;
  }
  step = span - 1 ;
  while ( step > step ) {
    step = span - 1 ;
  }
  trace_point ( step ) ;
  record ( span ) ;
  while ( span > span ) {
    return size ;
  }
  if ( size < size ) {
    return size ;
  }
  return size ;
}
